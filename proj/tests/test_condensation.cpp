#include "doctest.h"

#include <cmath>

#include "scsip/assembly.hpp"
#include "scsip/condensation.hpp"
#include "scsip/errors.hpp"
#include "scsip/problem.hpp"
#include "scsip/solve.hpp"

using namespace scsip;

namespace {

ProblemSpec laplace_with_source(const char* f)
{
    ProblemExpressions ex;
    ex.f = f;
    ex.constant_A = true;
    return problem_from_expressions(ex);
}

double rel_residual(const DenseMatrix& B, const Vector& u, const Vector& rhs)
{
    Vector r = matvec(B, u);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] -= rhs[i];
    return norm2(r) / std::max(norm2(rhs), 1e-300);
}

} // namespace

TEST_CASE("local particular solution")
{
    const PolyMesh mesh = build_mesh(4, HeMode::facet);
    for (const char* name : {"poisson-sin", "variable-a"})
        for (int k = 2; k <= 4; ++k) {
            const ConstraintBlock cb = assemble_constraints(mesh, k, builtin_case(name));
            for (std::size_t c = 0; c < cb.B.size(); ++c) {
                const LocalSolution s = local_particular_solution(cb.B[c], cb.F_psi[c]);
                CHECK(s.u.size() == static_cast<std::size_t>(poly_dim(k)));
                CHECK(s.p.size() == static_cast<std::size_t>(poly_dim(k - 2)));
                CHECK(rel_residual(cb.B[c], s.u, cb.F_psi[c]) <= 1e-11);
                // u = -B^T p lies in the row space
                const Vector btp = matvec_transposed(cb.B[c], s.p);
                for (std::size_t i = 0; i < s.u.size(); ++i)
                    CHECK(std::abs(s.u[i] + btp[i]) <= 1e-12 * (1.0 + norm2(s.u)));
            }
        }

    const ConstraintBlock zero = assemble_constraints(mesh, 3, laplace_with_source("0"));
    const LocalSolution z = local_particular_solution(zero.B[0], zero.F_psi[0]);
    CHECK(norm2(z.u) == 0.0);
    CHECK(norm2(z.p) == 0.0);
}

TEST_CASE("particular solution has the prescribed mean Laplacian")
{
    // A = I, f = 1, k = 2: the mean of -Laplace(u_loc) over the cell is 1
    const PolyMesh mesh = build_mesh(4, HeMode::facet);
    const ConstraintBlock cb = assemble_constraints(mesh, 2, laplace_with_source("1"));
    const MonomialBasis basis(2, {0, 0});
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const LocalSolution s = local_particular_solution(cb.B[c], cb.F_psi[c]);
        const double lap = 2.0 * s.u[basis.index_of(2, 0)] + 2.0 * s.u[basis.index_of(0, 2)];
        CHECK(std::abs(-lap - 1.0) <= 1e-11);
    }
}

TEST_CASE("kernel basis")
{
    const PolyMesh mesh = build_mesh(4, HeMode::facet);
    for (const char* name : {"poisson-sin", "variable-a"})
        for (int k = 2; k <= 4; ++k) {
            const ConstraintBlock cb = assemble_constraints(mesh, k, builtin_case(name));
            for (const auto& B : cb.B) {
                const DenseMatrix M = kernel_basis(B);
                CHECK(M.rows() == static_cast<std::size_t>(poly_dim(k)));
                CHECK(M.cols() == static_cast<std::size_t>(kernel_dim(k)));
                CHECK((B * M).max_abs() <= 1e-11 * B.max_abs());
                CHECK((M.transpose() * M - DenseMatrix::identity(M.cols())).max_abs() <= 1e-12);
            }
        }
    CHECK(kernel_dim(3) == 7);
    CHECK(kernel_dim(4) == 9);

    DenseMatrix hint(6, 5, 0.5);
    const ConstraintBlock cb = assemble_constraints(mesh, 2, laplace_with_source("1"));
    const DenseMatrix reused = kernel_basis(cb.B[3], &hint);
    CHECK((reused - hint).max_abs() == 0.0);
}

TEST_CASE("Laplacian kernel at k = 2 is the harmonic quadratics")
{
    const PolyMesh mesh = build_mesh(2, HeMode::facet);
    const ConstraintBlock cb = assemble_constraints(mesh, 2, laplace_with_source("1"));
    const MonomialBasis basis(2, {0, 0});
    // coefficients in the shifted basis: 1, x, y, xy, x^2 - y^2
    std::vector<Vector> harmonic(5, Vector(6, 0.0));
    harmonic[0][basis.index_of(0, 0)] = 1;
    harmonic[1][basis.index_of(1, 0)] = 1;
    harmonic[2][basis.index_of(0, 1)] = 1;
    harmonic[3][basis.index_of(1, 1)] = 1;
    harmonic[4][basis.index_of(2, 0)] = 1;
    harmonic[4][basis.index_of(0, 2)] = -1;
    for (const auto& B : cb.B) {
        const DenseMatrix M = kernel_basis(B);
        REQUIRE(M.cols() == 5);
        for (const auto& h : harmonic) {
            const Vector back = matvec(M, matvec_transposed(M, h));
            for (int i = 0; i < 6; ++i)
                CHECK(std::abs(back[i] - h[i]) <= 1e-10);
        }
    }
}

TEST_CASE("condense, reduce and reconstruct")
{
    const PolyMesh mesh = build_mesh(4, HeMode::facet);
    const ProblemSpec p = builtin_case("variable-a");
    const int k = 2;
    const BlockSystem sys = assemble_sip(mesh, k, default_penalty(k), p);
    const ConstraintBlock cb = assemble_constraints(mesh, k, p);
    const LocalCondensation cond = condense(cb);
    CHECK(cond.orthonormal);
    CHECK_FALSE(cond.shared_basis);
    const BlockSystem red = reduce_system(sys, cond);
    CHECK(red.block_size() == 5);
    CHECK(red.num_cells() == 16);
    CHECK(red.symmetry_defect() <= 1e-12);
    CHECK(red.blocks().size() == sys.blocks().size());

    // U' = 0 gives back the particular solutions
    const DGSolution loc = reconstruct(Vector(16 * 5, 0.0), cond, mesh.seeds);
    for (std::size_t c = 0; c < 16; ++c)
        CHECK(loc.coeffs[c] == cond.particular[c]);

    // the reduced solve satisfies every local constraint
    const LinearSolve ls = solve_spd(red);
    const DGSolution u = reconstruct(ls.x, cond, mesh.seeds);
    for (std::size_t c = 0; c < 16; ++c)
        CHECK(rel_residual(cb.B[c], u.coeffs[c], cb.F_psi[c]) <= 1e-10);

    // a zero particular part stays in the kernel
    LocalCondensation homog = cond;
    for (auto& v : homog.particular)
        std::fill(v.begin(), v.end(), 0.0);
    const DGSolution w = reconstruct(ls.x, homog, mesh.seeds);
    for (std::size_t c = 0; c < 16; ++c)
        CHECK(norm2(matvec(cb.B[c], w.coeffs[c])) <= 1e-11 * cb.B[c].max_abs() * norm2(w.coeffs[c]));

    CHECK_THROWS_AS(reconstruct(Vector(3, 0.0), cond, mesh.seeds), InvalidArgument);
    LocalCondensation short_cond = cond;
    short_cond.kernel.pop_back();
    CHECK_THROWS_AS(reduce_system(sys, short_cond), InvalidArgument);
}

TEST_CASE("zero source: reduced load is M^T F")
{
    const PolyMesh mesh = build_mesh(2, HeMode::facet);
    ProblemExpressions ex;
    ex.f = "0";
    ex.g = "x + y^2";
    const ProblemSpec p = problem_from_expressions(ex);
    const BlockSystem sys = assemble_sip(mesh, 3, 24.0, p);
    const LocalCondensation cond = condense(assemble_constraints(mesh, 3, p));
    const BlockSystem red = reduce_system(sys, cond);
    for (std::size_t c = 0; c < 4; ++c) {
        CHECK(norm2(cond.particular[c]) == 0.0);
        const Vector expect = matvec_transposed(cond.kernel[c], sys.rhs(c));
        for (std::size_t i = 0; i < expect.size(); ++i)
            CHECK(red.rhs(c)[i] == doctest::Approx(expect[i]).epsilon(1e-14));
    }
}

TEST_CASE("shared basis for constant coefficients")
{
    const PolyMesh mesh = build_mesh(4, HeMode::facet);
    const ConstraintBlock cb = assemble_constraints(mesh, 3, builtin_case("poisson-sin"));
    const LocalCondensation shared = condense(cb, {true, 1});
    CHECK(shared.shared_basis);
    for (std::size_t c = 1; c < shared.kernel.size(); ++c)
        CHECK((shared.kernel[c] - shared.kernel[0]).max_abs() == 0.0);
    for (std::size_t c = 0; c < cb.B.size(); ++c)
        CHECK((cb.B[c] * shared.kernel[c]).max_abs() <= 1e-11 * cb.B[c].max_abs());
}

TEST_CASE("rank-deficient constraints name the cell")
{
    ConstraintBlock cb;
    cb.degree = 2;
    DenseMatrix good(1, 6);
    good(0, 3) = 1.0;
    cb.B = {good, DenseMatrix(1, 6)};
    cb.F_psi = {Vector{1.0}, Vector{1.0}};
    try {
        condense(cb);
        FAIL("expected SingularConstraint");
    } catch (const SingularConstraint& e) {
        CHECK(e.cell() == 1);
    }
}
