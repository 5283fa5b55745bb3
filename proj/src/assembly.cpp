#include "scsip/assembly.hpp"

#include <cmath>
#include <string>

#include "scsip/errors.hpp"
#include "scsip/parallel.hpp"
#include "scsip/quadrature.hpp"

namespace scsip {

BlockSystem::BlockSystem(std::size_t num_cells, std::size_t block_size)
    : num_cells_(num_cells), block_size_(block_size), rhs_(num_cells, Vector(block_size, 0.0))
{
}

DenseMatrix& BlockSystem::block(int row_cell, int col_cell)
{
    auto [it, inserted] = blocks_.try_emplace({row_cell, col_cell});
    if (inserted)
        it->second = DenseMatrix(block_size_, block_size_);
    return it->second;
}

const DenseMatrix* BlockSystem::find(int row_cell, int col_cell) const
{
    auto it = blocks_.find({row_cell, col_cell});
    return it == blocks_.end() ? nullptr : &it->second;
}

Vector BlockSystem::rhs_flat() const
{
    Vector out;
    out.reserve(num_unknowns());
    for (const auto& r : rhs_)
        out.insert(out.end(), r.begin(), r.end());
    return out;
}

Vector BlockSystem::apply(std::span<const double> x) const
{
    if (x.size() != num_unknowns())
        throw InvalidArgument("BlockSystem::apply: size mismatch");
    Vector y(num_unknowns(), 0.0);
    const std::size_t b = block_size_;
    for (const auto& [key, blk] : blocks_) {
        const auto part = matvec(blk, x.subspan(key.second * b, b));
        for (std::size_t i = 0; i < b; ++i)
            y[key.first * b + i] += part[i];
    }
    return y;
}

double BlockSystem::symmetry_defect() const
{
    double worst = 0.0;
    for (const auto& [key, blk] : blocks_) {
        const DenseMatrix* mirror = find(key.second, key.first);
        if (!mirror)
            return std::numeric_limits<double>::infinity();
        const double scale = blk.frobenius_norm();
        if (scale == 0.0)
            continue;
        worst = std::max(worst, (blk - mirror->transpose()).frobenius_norm() / scale);
    }
    return worst;
}

bool BlockSystem::pattern_symmetric() const
{
    for (const auto& [key, blk] : blocks_)
        if (!find(key.second, key.first))
            return false;
    return true;
}

double DGSolution::value(std::size_t cell, Point x) const
{
    const MonomialBasis basis(degree, shifts[cell]);
    Vector v(basis.size());
    basis.values(x, v);
    return dot(v, coeffs[cell]);
}

Point DGSolution::gradient(std::size_t cell, Point x) const
{
    const MonomialBasis basis(degree, shifts[cell]);
    std::vector<Point> g(basis.size());
    basis.gradients(x, g);
    Point out{};
    for (int i = 0; i < basis.size(); ++i)
        out = out + coeffs[cell][i] * g[i];
    return out;
}

DGSolution make_solution(const PolyMesh& mesh, int k, std::span<const double> flat)
{
    const std::size_t nk = poly_dim(k);
    if (flat.size() != nk * mesh.num_cells())
        throw InvalidArgument("make_solution: expected " + std::to_string(nk * mesh.num_cells()) + " coefficients");
    DGSolution sol;
    sol.degree = k;
    sol.shifts = mesh.seeds;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c)
        sol.coeffs.emplace_back(flat.begin() + c * nk, flat.begin() + (c + 1) * nk);
    return sol;
}

namespace {

// Quadrature points and weights covering one cell.
MappedRule cell_rule(const PolyMesh& mesh, std::size_t cell, int degree)
{
    const QuadRule& rule = triangle_rule(degree);
    MappedRule out;
    for (int t : mesh.cells[cell]) {
        const auto p = mesh.tri.triangle_points(t);
        auto m = map_to_triangle(rule, p[0], p[1], p[2]);
        out.points.insert(out.points.end(), m.points.begin(), m.points.end());
        out.weights.insert(out.weights.end(), m.weights.begin(), m.weights.end());
    }
    return out;
}

struct FacetBlocks {
    DenseMatrix b00, b01, b10, b11;
    Vector rhs;
};

void check_degree(int k)
{
    if (k < 2)
        throw InvalidArgument("polynomial degree must be at least 2, got " + std::to_string(k));
    if (volume_quadrature_degree(k) > max_triangle_degree)
        throw UnsupportedDegree("degree " + std::to_string(k) + " exceeds the shipped quadrature rules");
}

} // namespace

DGSolution l2_project(const PolyMesh& mesh, int k, const ScalarField& u)
{
    DGSolution sol;
    sol.degree = k;
    sol.shifts = mesh.seeds;
    sol.coeffs.resize(mesh.num_cells());
    const int nk = poly_dim(k);
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        // Work with monomials scaled by h_T to keep the mass matrix well conditioned.
        const MonomialBasis basis(k, mesh.seeds[c]);
        const double h = mesh.h_T[c];
        Vector scale(nk);
        for (int i = 0; i < nk; ++i) {
            const auto e = basis.exponents(i);
            scale[i] = std::pow(h, -(e[0] + e[1]));
        }
        const auto q = cell_rule(mesh, c, 2 * k + 2);
        DenseMatrix mass(nk, nk);
        Vector rhs(nk, 0.0), phi(nk);
        for (std::size_t p = 0; p < q.points.size(); ++p) {
            basis.values(q.points[p], phi);
            for (int i = 0; i < nk; ++i)
                phi[i] *= scale[i];
            const double fu = u(q.points[p]);
            for (int i = 0; i < nk; ++i) {
                rhs[i] += q.weights[p] * fu * phi[i];
                for (int j = 0; j < nk; ++j)
                    mass(i, j) += q.weights[p] * phi[i] * phi[j];
            }
        }
        Vector coef = solve_spd_dense(mass, rhs);
        for (int i = 0; i < nk; ++i)
            coef[i] *= scale[i];
        sol.coeffs[c] = std::move(coef);
    }
    return sol;
}

BlockSystem assemble_sip(const PolyMesh& mesh, int k, double gamma, const ProblemSpec& problem,
                         const AssemblyOptions& options)
{
    check_degree(k);
    if (!(gamma > 0.0))
        throw InvalidArgument("penalty parameter must be positive, got " + std::to_string(gamma));
    if (!mesh.has_topology)
        throw StateError("assemble_sip requires mesh topology");

    const std::size_t nc = mesh.num_cells();
    const int nk = poly_dim(k);
    BlockSystem sys(nc, nk);

    std::vector<DenseMatrix> vol(nc);
    std::vector<Vector> vol_rhs(nc);
    parallel_for(nc, options.threads, [&](std::size_t c) {
        const MonomialBasis basis(k, mesh.seeds[c]);
        const auto q = cell_rule(mesh, c, volume_quadrature_degree(k));
        DenseMatrix K(nk, nk);
        Vector F(nk, 0.0), phi(nk);
        std::vector<Point> grad(nk), flux(nk);
        for (std::size_t p = 0; p < q.points.size(); ++p) {
            const Point x = q.points[p];
            const double w = q.weights[p];
            basis.values(x, phi);
            basis.gradients(x, grad);
            const SymTensor a = problem.A(x);
            const double fx = problem.f(x);
            for (int j = 0; j < nk; ++j)
                flux[j] = a.apply(grad[j]);
            for (int i = 0; i < nk; ++i) {
                F[i] += w * fx * phi[i];
                for (int j = 0; j < nk; ++j)
                    K(i, j) += w * dot(grad[i], flux[j]);
            }
        }
        vol[c] = std::move(K);
        vol_rhs[c] = std::move(F);
    });

    const QuadRule erule = segment_rule(edge_quadrature_degree(k));
    std::vector<FacetBlocks> fb(mesh.facets.size());
    parallel_for(mesh.facets.size(), options.threads, [&](std::size_t fi) {
        const Facet& facet = mesh.facets[fi];
        const double sigma = gamma / facet.h_E;
        FacetBlocks out;
        out.b00 = DenseMatrix(nk, nk);
        Vector phi0(nk), phi1(nk), t0(nk), t1(nk);
        std::vector<Point> g0(nk), g1(nk);
        const MonomialBasis basis0(k, mesh.seeds[facet.cells[0]]);
        if (facet.is_boundary()) {
            out.rhs.assign(nk, 0.0);
            for (const auto& e : facet.edges) {
                const auto q = map_to_segment(erule, e.a, e.b);
                for (std::size_t p = 0; p < q.points.size(); ++p) {
                    const Point x = q.points[p];
                    const double w = q.weights[p];
                    basis0.values(x, phi0);
                    basis0.gradients(x, g0);
                    const Point an = problem.A(x).apply(e.normal);
                    for (int i = 0; i < nk; ++i)
                        t0[i] = dot(g0[i], an);
                    const double gx = problem.g(x);
                    for (int i = 0; i < nk; ++i) {
                        out.rhs[i] += w * gx * (sigma * phi0[i] - t0[i]);
                        for (int j = 0; j < nk; ++j)
                            out.b00(i, j) += w * (sigma * phi0[i] * phi0[j] - t0[i] * phi0[j] - t0[j] * phi0[i]);
                    }
                }
            }
            fb[fi] = std::move(out);
            return;
        }
        const MonomialBasis basis1(k, mesh.seeds[facet.cells[1]]);
        out.b01 = DenseMatrix(nk, nk);
        out.b10 = DenseMatrix(nk, nk);
        out.b11 = DenseMatrix(nk, nk);
        for (const auto& e : facet.edges) {
            const auto q = map_to_segment(erule, e.a, e.b);
            for (std::size_t p = 0; p < q.points.size(); ++p) {
                const Point x = q.points[p];
                const double w = q.weights[p];
                basis0.values(x, phi0);
                basis0.gradients(x, g0);
                basis1.values(x, phi1);
                basis1.gradients(x, g1);
                const Point an = problem.A(x).apply(e.normal);
                for (int i = 0; i < nk; ++i) {
                    t0[i] = dot(g0[i], an);
                    t1[i] = dot(g1[i], an);
                }
                // Entry (a,i; b,j): sigma s_a s_b phi_i phi_j - (s_b t_i phi_j + s_a t_j phi_i) / 2,
                // with s = +1 on cells[0] and -1 on cells[1].
                for (int i = 0; i < nk; ++i)
                    for (int j = 0; j < nk; ++j) {
                        out.b00(i, j) += w * (sigma * phi0[i] * phi0[j] - 0.5 * (t0[i] * phi0[j] + t0[j] * phi0[i]));
                        out.b01(i, j) += w * (-sigma * phi0[i] * phi1[j] - 0.5 * (-t0[i] * phi1[j] + t1[j] * phi0[i]));
                        out.b10(i, j) += w * (-sigma * phi1[i] * phi0[j] - 0.5 * (t1[i] * phi0[j] - t0[j] * phi1[i]));
                        out.b11(i, j) += w * (sigma * phi1[i] * phi1[j] + 0.5 * (t1[i] * phi1[j] + t1[j] * phi1[i]));
                    }
            }
        }
        fb[fi] = std::move(out);
    });

    // Serial reduction in fixed order keeps the result independent of the thread count.
    for (std::size_t c = 0; c < nc; ++c) {
        sys.block(static_cast<int>(c), static_cast<int>(c)) += vol[c];
        sys.rhs(c) = vol_rhs[c];
    }
    for (std::size_t fi = 0; fi < mesh.facets.size(); ++fi) {
        const Facet& facet = mesh.facets[fi];
        const int c0 = facet.cells[0];
        sys.block(c0, c0) += fb[fi].b00;
        if (facet.is_boundary()) {
            for (int i = 0; i < nk; ++i)
                sys.rhs(c0)[i] += fb[fi].rhs[i];
            continue;
        }
        const int c1 = facet.cells[1];
        sys.block(c0, c1) += fb[fi].b01;
        sys.block(c1, c0) += fb[fi].b10;
        sys.block(c1, c1) += fb[fi].b11;
    }
    return sys;
}

ConstraintBlock assemble_constraints(const PolyMesh& mesh, int k, const ProblemSpec& problem,
                                     const AssemblyOptions& options)
{
    check_degree(k);
    if (!mesh.has_topology)
        throw StateError("assemble_constraints requires mesh topology");
    const std::size_t nc = mesh.num_cells();
    const int nk = poly_dim(k);
    const int nq = poly_dim(k - 2);
    const auto facets_of = mesh.facets_of_cells();
    const QuadRule erule = segment_rule(edge_quadrature_degree(k));

    ConstraintBlock out;
    out.degree = k;
    out.B.resize(nc);
    out.F_psi.resize(nc);
    parallel_for(nc, options.threads, [&](std::size_t c) {
        const MonomialBasis phi_basis(k, mesh.seeds[c]);
        const MonomialBasis psi_basis(k - 2, mesh.seeds[c]);
        DenseMatrix B(nq, nk);
        Vector F(nq, 0.0), psi(nq), phi(nk);
        std::vector<Point> gpsi(nq), gphi(nk);

        const auto q = cell_rule(mesh, c, volume_quadrature_degree(k));
        for (std::size_t p = 0; p < q.points.size(); ++p) {
            const Point x = q.points[p];
            const double w = q.weights[p];
            psi_basis.values(x, psi);
            psi_basis.gradients(x, gpsi);
            phi_basis.gradients(x, gphi);
            const SymTensor a = problem.A(x);
            const double fx = problem.f(x);
            for (int i = 0; i < nq; ++i) {
                F[i] += w * fx * psi[i];
                for (int j = 0; j < nk; ++j)
                    B(i, j) += w * dot(gpsi[i], a.apply(gphi[j]));
            }
        }
        for (int fi : facets_of[c]) {
            const Facet& facet = mesh.facets[fi];
            const double orient = facet.cells[0] == static_cast<int>(c) ? 1.0 : -1.0;
            for (const auto& e : facet.edges) {
                const auto eq = map_to_segment(erule, e.a, e.b);
                const Point n = orient * e.normal;
                for (std::size_t p = 0; p < eq.points.size(); ++p) {
                    const Point x = eq.points[p];
                    const double w = eq.weights[p];
                    psi_basis.values(x, psi);
                    phi_basis.gradients(x, gphi);
                    const Point an = problem.A(x).apply(n);
                    for (int i = 0; i < nq; ++i)
                        for (int j = 0; j < nk; ++j)
                            B(i, j) -= w * psi[i] * dot(gphi[j], an);
                }
            }
        }
        out.B[c] = std::move(B);
        out.F_psi[c] = std::move(F);
    });
    return out;
}

ErrorNorms error_norms(const DGSolution& sol, const ExactSolution& exact, const PolyMesh& mesh)
{
    ErrorNorms e;
    const int nk = poly_dim(sol.degree);
    Vector phi(nk);
    std::vector<Point> grad(nk);
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const MonomialBasis basis(sol.degree, sol.shifts[c]);
        const auto q = cell_rule(mesh, c, volume_quadrature_degree(sol.degree));
        for (std::size_t p = 0; p < q.points.size(); ++p) {
            const Point x = q.points[p];
            basis.values(x, phi);
            basis.gradients(x, grad);
            Point gh{};
            for (int i = 0; i < nk; ++i)
                gh = gh + sol.coeffs[c][i] * grad[i];
            const double du = exact.u(x) - dot(phi, sol.coeffs[c]);
            const Point dg = exact.grad(x) - gh;
            e.l2 += q.weights[p] * du * du;
            e.h1 += q.weights[p] * scsip::dot(dg, dg);
        }
    }
    e.l2 = std::sqrt(e.l2);
    e.h1 = std::sqrt(e.h1);
    return e;
}

double l2_difference(const DGSolution& a, const DGSolution& b, const PolyMesh& mesh)
{
    double s = 0.0;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const auto q = cell_rule(mesh, c, 2 * std::max(a.degree, b.degree));
        for (std::size_t p = 0; p < q.points.size(); ++p) {
            const double d = a.value(c, q.points[p]) - b.value(c, q.points[p]);
            s += q.weights[p] * d * d;
        }
    }
    return std::sqrt(s);
}

double l2_norm(const DGSolution& a, const PolyMesh& mesh)
{
    double s = 0.0;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const auto q = cell_rule(mesh, c, 2 * a.degree);
        for (std::size_t p = 0; p < q.points.size(); ++p) {
            const double v = a.value(c, q.points[p]);
            s += q.weights[p] * v * v;
        }
    }
    return std::sqrt(s);
}

double triple_norm(const DGSolution& sol, const PolyMesh& mesh)
{
    if (!mesh.has_topology)
        throw StateError("triple_norm requires mesh topology");
    double s = 0.0;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const auto q = cell_rule(mesh, c, 2 * sol.degree);
        for (std::size_t p = 0; p < q.points.size(); ++p) {
            const Point g = sol.gradient(c, q.points[p]);
            s += q.weights[p] * scsip::dot(g, g);
        }
    }
    const QuadRule erule = segment_rule(2 * sol.degree);
    for (const auto& facet : mesh.facets) {
        const int c0 = facet.cells[0], c1 = facet.cells[1];
        const double weight = 1.0 / mesh.h_T[c0] + (c1 >= 0 ? 1.0 / mesh.h_T[c1] : 0.0);
        double jump2 = 0.0;
        for (const auto& e : facet.edges) {
            const auto q = map_to_segment(erule, e.a, e.b);
            for (std::size_t p = 0; p < q.points.size(); ++p) {
                double j = sol.value(c0, q.points[p]);
                if (c1 >= 0)
                    j -= sol.value(c1, q.points[p]);
                jump2 += q.weights[p] * j * j;
            }
        }
        s += weight * jump2;
    }
    return std::sqrt(s);
}

double multiplier_norm(const DGSolution& q, const PolyMesh& mesh)
{
    double s = 0.0;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const auto rule = cell_rule(mesh, c, std::max(0, 2 * q.degree));
        double cell = 0.0;
        for (std::size_t p = 0; p < rule.points.size(); ++p) {
            const double v = q.value(c, rule.points[p]);
            cell += rule.weights[p] * v * v;
        }
        s += mesh.h_T[c] * mesh.h_T[c] * cell;
    }
    return std::sqrt(s);
}

} // namespace scsip
