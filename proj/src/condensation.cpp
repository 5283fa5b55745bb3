#include "scsip/condensation.hpp"

#include <string>

#include "scsip/errors.hpp"
#include "scsip/parallel.hpp"

namespace scsip {

LocalSolution local_particular_solution(const DenseMatrix& B, std::span<const double> F_psi)
{
    const Vector zero(B.cols(), 0.0);
    auto sol = ConstraintFactor(B).solve(zero, F_psi);
    return {std::move(sol.u), std::move(sol.p)};
}

namespace {

DenseMatrix kernel_from_factor(const ConstraintFactor& factor)
{
    const std::size_t n = factor.cols();
    const std::size_t want = n - factor.rows();
    std::vector<Vector> candidates;
    candidates.reserve(n);
    Vector e(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        e[s] = 1.0;
        candidates.push_back(factor.project_to_kernel(e));
        e[s] = 0.0;
    }
    const auto basis = mgs_orthonormalize(candidates, kernel_drop_tol, want);
    if (basis.size() != want)
        throw RankAnomaly("kernel basis has " + std::to_string(basis.size()) + " vectors, expected " +
                          std::to_string(want));
    DenseMatrix M(n, want);
    for (std::size_t j = 0; j < want; ++j)
        for (std::size_t i = 0; i < n; ++i)
            M(i, j) = basis[j][i];
    return M;
}

} // namespace

DenseMatrix kernel_basis(const DenseMatrix& B, const DenseMatrix* reuse_hint)
{
    if (reuse_hint)
        return *reuse_hint;
    return kernel_from_factor(ConstraintFactor(B));
}

LocalCondensation condense(const ConstraintBlock& constraints, const CondensationOptions& options)
{
    const std::size_t nc = constraints.B.size();
    const int k = constraints.degree;
    LocalCondensation cond;
    cond.degree = k;
    cond.shared_basis = options.share_basis;
    cond.particular.resize(nc);
    cond.multipliers.resize(nc);
    cond.kernel.resize(nc);

    std::optional<DenseMatrix> shared;
    if (options.share_basis && nc > 0)
        shared = kernel_basis(constraints.B[0]);

    parallel_for(nc, options.threads, [&](std::size_t c) {
        const DenseMatrix& B = constraints.B[c];
        if (rank_svd(B, constraint_rank_tol) != poly_dim(k - 2))
            throw SingularConstraint("constraint matrix is not of full row rank", c);
        std::optional<ConstraintFactor> factor;
        try {
            factor.emplace(B);
        } catch (const RankAnomaly& e) {
            throw SingularConstraint(e.what(), c);
        }
        const Vector zero(B.cols(), 0.0);
        auto sol = factor->solve(zero, constraints.F_psi[c]);
        cond.particular[c] = std::move(sol.u);
        cond.multipliers[c] = std::move(sol.p);
        cond.kernel[c] = shared ? *shared : kernel_from_factor(*factor);
    });
    return cond;
}

BlockSystem reduce_system(const BlockSystem& sys, const LocalCondensation& cond)
{
    if (cond.kernel.size() != sys.num_cells())
        throw InvalidArgument("reduce_system: condensation covers " + std::to_string(cond.kernel.size()) +
                              " cells, system has " + std::to_string(sys.num_cells()));
    const std::size_t nk = sys.block_size();
    const std::size_t nr = cond.kernel.empty() ? 0 : cond.kernel.front().cols();
    for (const auto& M : cond.kernel)
        if (M.rows() != nk || M.cols() != nr)
            throw InvalidArgument("reduce_system: kernel basis shape mismatch");

    BlockSystem reduced(sys.num_cells(), nr);
    std::vector<DenseMatrix> Mt(cond.kernel.size());
    for (std::size_t c = 0; c < cond.kernel.size(); ++c)
        Mt[c] = cond.kernel[c].transpose();

    std::vector<Vector> load(sys.num_cells());
    for (std::size_t c = 0; c < sys.num_cells(); ++c)
        load[c] = sys.rhs(c);
    for (const auto& [key, blk] : sys.blocks()) {
        const auto [l, m] = key;
        reduced.block(l, m) = Mt[l] * blk * cond.kernel[m];
        const Vector au = matvec(blk, cond.particular[m]);
        for (std::size_t i = 0; i < nk; ++i)
            load[l][i] -= au[i];
    }
    for (std::size_t c = 0; c < sys.num_cells(); ++c)
        reduced.rhs(c) = matvec(Mt[c], load[c]);
    return reduced;
}

DGSolution reconstruct(std::span<const double> reduced, const LocalCondensation& cond, const std::vector<Point>& shifts)
{
    const std::size_t nc = cond.kernel.size();
    const std::size_t nr = nc ? cond.kernel.front().cols() : 0;
    if (reduced.size() != nc * nr)
        throw InvalidArgument("reconstruct: reduced vector has wrong length");
    DGSolution sol;
    sol.degree = cond.degree;
    sol.shifts = shifts;
    sol.coeffs.resize(nc);
    for (std::size_t c = 0; c < nc; ++c) {
        Vector full = matvec(cond.kernel[c], reduced.subspan(c * nr, nr));
        for (std::size_t i = 0; i < full.size(); ++i)
            full[i] += cond.particular[c][i];
        sol.coeffs[c] = std::move(full);
    }
    return sol;
}

} // namespace scsip
