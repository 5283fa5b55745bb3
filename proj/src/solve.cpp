#include "scsip/solve.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "scsip/errors.hpp"

namespace scsip {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using EVec = Eigen::VectorXd;

constexpr int max_refinement_steps = 8;

SpMat to_sparse(const BlockSystem& sys)
{
    const std::size_t b = sys.block_size();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(sys.blocks().size() * b * b);
    for (const auto& [key, blk] : sys.blocks())
        for (std::size_t i = 0; i < b; ++i)
            for (std::size_t j = 0; j < b; ++j)
                if (blk(i, j) != 0.0)
                    trip.emplace_back(static_cast<int>(key.first * b + i), static_cast<int>(key.second * b + j),
                                      blk(i, j));
    const auto n = static_cast<Eigen::Index>(sys.num_unknowns());
    SpMat a(n, n);
    a.setFromTriplets(trip.begin(), trip.end());
    return a;
}

EVec to_eigen(const Vector& v) { return Eigen::Map<const EVec>(v.data(), static_cast<Eigen::Index>(v.size())); }

// b - a x accumulated in extended precision. With unscaled monomials |A| |x| can exceed
// |b| by several orders of magnitude, and a double-precision residual would then stall
// both the refinement and the reported residual near 1e-12.
EVec residual(const SpMat& a, const EVec& x, const EVec& b)
{
    std::vector<long double> r(static_cast<std::size_t>(b.size()));
    for (Eigen::Index i = 0; i < b.size(); ++i)
        r[i] = b[i];
    for (Eigen::Index col = 0; col < a.outerSize(); ++col) {
        const long double xc = x[col];
        for (SpMat::InnerIterator it(a, col); it; ++it)
            r[it.row()] -= static_cast<long double>(it.value()) * xc;
    }
    EVec out(b.size());
    for (Eigen::Index i = 0; i < b.size(); ++i)
        out[i] = static_cast<double>(r[i]);
    return out;
}

double relative_residual(const SpMat& a, const EVec& x, const EVec& b)
{
    const double nb = b.norm();
    const double r = residual(a, x, b).norm();
    return nb > 0.0 ? r / nb : r;
}

// Solves a x = b through the factorization of the scaled matrix D a D, refining against a.
template <class Factor>
EVec refined_solve(const Factor& factor, const SpMat& a, const EVec& d, const EVec& b)
{
    auto solve_scaled = [&](const EVec& rhs) -> EVec {
        EVec y = factor.solve(d.cwiseProduct(rhs));
        return d.cwiseProduct(y);
    };
    EVec x = solve_scaled(b);
    double res = relative_residual(a, x, b);
    for (int step = 0; step < max_refinement_steps && res > 0.1 * solve_residual_tol; ++step) {
        const EVec next = x + solve_scaled(residual(a, x, b));
        const double next_res = relative_residual(a, next, b);
        if (!(next_res < res))
            break;
        x = next;
        res = next_res;
    }
    return x;
}

EVec jacobi_scaling(const SpMat& a, Eigen::Index count)
{
    EVec d = EVec::Ones(a.rows());
    for (Eigen::Index i = 0; i < count; ++i) {
        const double aii = a.coeff(i, i);
        d[i] = aii > 0.0 ? 1.0 / std::sqrt(aii) : 1.0;
    }
    return d;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

LinearSolve solve_spd(const BlockSystem& sys)
{
    const SpMat a = to_sparse(sys);
    const EVec b = to_eigen(sys.rhs_flat());
    const EVec d = jacobi_scaling(a, a.rows());
    const SpMat scaled = d.asDiagonal() * a * d.asDiagonal();

    Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
    ldlt.compute(scaled);
    if (ldlt.info() != Eigen::Success)
        throw NotPositiveDefinite("symmetric factorization failed");
    LinearSolve out;
    out.min_pivot = a.rows() > 0 ? ldlt.vectorD().minCoeff() : 1.0;
    if (!(out.min_pivot > 0.0))
        throw NotPositiveDefinite("non-positive pivot " + std::to_string(out.min_pivot) +
                                  " in symmetric factorization; the penalty parameter is likely too small");

    const EVec x = refined_solve(ldlt, a, d, b);
    out.residual = relative_residual(a, x, b);
    if (!(out.residual <= solve_residual_tol)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3e", out.residual);
        throw SolverError(std::string("SPD solve residual ") + buf + " above tolerance");
    }
    out.x.assign(x.data(), x.data() + x.size());
    return out;
}

std::string to_string(Method m)
{
    switch (m) {
    case Method::sip: return "sip";
    case Method::scsip: return "scsip";
    case Method::saddle: return "saddle";
    }
    return "?";
}

Method method_from_string(const std::string& s)
{
    if (s == "sip")
        return Method::sip;
    if (s == "scsip")
        return Method::scsip;
    if (s == "saddle")
        return Method::saddle;
    throw ConfigError("unknown method '" + s + "' (expected sip, scsip or saddle)");
}

SolveReport run_sip(const PolyMesh& mesh, int k, double gamma, const ProblemSpec& problem, const SolveOptions& options)
{
    const auto t0 = std::chrono::steady_clock::now();
    const BlockSystem sys = assemble_sip(mesh, k, gamma, problem, {options.threads});
    const LinearSolve ls = solve_spd(sys);
    SolveReport r;
    r.method = Method::sip;
    r.unknowns = sys.num_unknowns();
    r.residual = ls.residual;
    r.solution = make_solution(mesh, k, ls.x);
    r.seconds = seconds_since(t0);
    return r;
}

SolveReport run_scsip(const PolyMesh& mesh, int k, double gamma, const ProblemSpec& problem,
                      const SolveOptions& options)
{
    const auto t0 = std::chrono::steady_clock::now();
    const AssemblyOptions aopt{options.threads};
    const BlockSystem sys = assemble_sip(mesh, k, gamma, problem, aopt);
    const ConstraintBlock constraints = assemble_constraints(mesh, k, problem, aopt);
    const LocalCondensation cond =
        condense(constraints, {options.share_kernel_basis.value_or(problem.constant_coefficients), options.threads});
    const BlockSystem reduced = reduce_system(sys, cond);
    const LinearSolve ls = solve_spd(reduced);
    SolveReport r;
    r.method = Method::scsip;
    r.unknowns = reduced.num_unknowns();
    r.residual = ls.residual;
    r.solution = reconstruct(ls.x, cond, mesh.seeds);
    r.seconds = seconds_since(t0);
    return r;
}

SolveReport run_saddle_oracle(const PolyMesh& mesh, int k, double gamma, const ProblemSpec& problem,
                              const SolveOptions& options)
{
    const auto t0 = std::chrono::steady_clock::now();
    const AssemblyOptions aopt{options.threads};
    const BlockSystem sys = assemble_sip(mesh, k, gamma, problem, aopt);
    const ConstraintBlock constraints = assemble_constraints(mesh, k, problem, aopt);

    const std::size_t nc = mesh.num_cells();
    const std::size_t nk = poly_dim(k), nq = poly_dim(k - 2);
    std::vector<double> weight(nc, 1.0);
    if (options.constraint_weights) {
        if (options.constraint_weights->size() != nc)
            throw InvalidArgument("constraint_weights must have one entry per cell");
        weight = *options.constraint_weights;
    } else if (options.weighted_constraints) {
        for (std::size_t c = 0; c < nc; ++c)
            weight[c] = mesh.h_T[c] * mesh.h_T[c];
    }

    const auto nu = static_cast<Eigen::Index>(nc * nk);
    const auto n = nu + static_cast<Eigen::Index>(nc * nq);
    SpMat a = to_sparse(sys);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(a.nonZeros() + 2 * nc * nq * nk);
    for (Eigen::Index col = 0; col < a.outerSize(); ++col)
        for (SpMat::InnerIterator it(a, col); it; ++it)
            trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    EVec b = EVec::Zero(n);
    b.head(nu) = to_eigen(sys.rhs_flat());
    for (std::size_t c = 0; c < nc; ++c) {
        const DenseMatrix& B = constraints.B[c];
        for (std::size_t r = 0; r < nq; ++r) {
            const int row = static_cast<int>(nu + c * nq + r);
            for (std::size_t j = 0; j < nk; ++j) {
                const double v = weight[c] * B(r, j);
                if (v == 0.0)
                    continue;
                const int col = static_cast<int>(c * nk + j);
                trip.emplace_back(row, col, v);
                trip.emplace_back(col, row, v);
            }
            b[row] = weight[c] * constraints.F_psi[c][r];
        }
    }
    SpMat kkt(n, n);
    kkt.setFromTriplets(trip.begin(), trip.end());
    kkt.makeCompressed();

    // Symmetric equilibration: Jacobi on the primal block, then unit rows for the constraints.
    EVec d = jacobi_scaling(kkt, nu);
    std::vector<double> row_norm2(static_cast<std::size_t>(n - nu), 0.0);
    for (Eigen::Index col = 0; col < nu; ++col)
        for (SpMat::InnerIterator it(kkt, col); it; ++it)
            if (it.row() >= nu)
                row_norm2[it.row() - nu] += std::pow(it.value() * d[col], 2);
    for (Eigen::Index i = nu; i < n; ++i)
        d[i] = row_norm2[i - nu] > 0.0 ? 1.0 / std::sqrt(row_norm2[i - nu]) : 1.0;
    const SpMat scaled = d.asDiagonal() * kkt * d.asDiagonal();

    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(scaled);
    lu.factorize(scaled);
    if (lu.info() != Eigen::Success)
        throw SolverError("saddle-point system is singular: " + lu.lastErrorMessage());
    const EVec x = refined_solve(lu, kkt, d, b);

    SolveReport r;
    r.method = Method::saddle;
    r.unknowns = static_cast<std::size_t>(n);
    r.residual = relative_residual(kkt, x, b);
    if (!(r.residual <= solve_residual_tol)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3e", r.residual);
        throw SolverError(std::string("saddle solve residual ") + buf + " above tolerance");
    }
    r.solution = make_solution(mesh, k, std::span<const double>(x.data(), static_cast<std::size_t>(nu)));

    // Express the multiplier against the h_T^2-weighted form: p_h = weight / h_T^2 * p.
    DGSolution p;
    p.degree = k - 2;
    p.shifts = mesh.seeds;
    for (std::size_t c = 0; c < nc; ++c) {
        Vector coef(x.data() + nu + c * nq, x.data() + nu + (c + 1) * nq);
        const double factor = weight[c] / (mesh.h_T[c] * mesh.h_T[c]);
        for (double& v : coef)
            v *= factor;
        p.coeffs.push_back(std::move(coef));
    }
    r.multiplier = std::move(p);
    r.seconds = seconds_since(t0);
    return r;
}

SolveReport run_method(Method method, const PolyMesh& mesh, int k, double gamma, const ProblemSpec& problem,
                       const SolveOptions& options)
{
    switch (method) {
    case Method::sip: return run_sip(mesh, k, gamma, problem, options);
    case Method::scsip: return run_scsip(mesh, k, gamma, problem, options);
    case Method::saddle: return run_saddle_oracle(mesh, k, gamma, problem, options);
    }
    throw InvalidArgument("unknown method");
}

PolyMesh build_mesh(int n, HeMode he_mode)
{
    TopologyOptions opt;
    opt.he_mode = he_mode;
    opt.uniform_h = 1.0 / n;
    return build_topology(agglomerate(generate_background(n), n), opt);
}

} // namespace scsip
