#pragma once

#include <optional>
#include <span>
#include <vector>

#include "scsip/assembly.hpp"
#include "scsip/linalg.hpp"

namespace scsip {

/// Relative singular-value threshold used for the constraint rank check.
inline constexpr double constraint_rank_tol = 1e-10;
/// Gram-Schmidt drop tolerance for kernel vectors.
inline constexpr double kernel_drop_tol = 1e-10;

/// Kernel dimension N_k - N_{k-2} = 2k + 1.
constexpr int kernel_dim(int k) { return poly_dim(k) - poly_dim(k - 2); }

/// Per-cell particular solutions and orthonormal kernel bases of the constraint matrices.
struct LocalCondensation {
    int degree = 0;
    std::vector<Vector> particular;       // u^(l), length N_k
    std::vector<Vector> multipliers;      // p^(l) of the local saddle problem, length N_{k-2}
    std::vector<DenseMatrix> kernel;      // M^(l), N_k x (2k+1), orthonormal columns
    bool orthonormal = true;
    bool shared_basis = false;
};

struct LocalSolution {
    Vector u;
    Vector p;
};

/// Minimum-norm solution of u + B^T p = 0, B u = F_psi. Throws RankAnomaly if B is
/// rank deficient.
LocalSolution local_particular_solution(const DenseMatrix& B, std::span<const double> F_psi);

/// Orthonormal basis of ker B built from projections of the canonical vectors. When
/// reuse_hint is given it is returned unchanged.
DenseMatrix kernel_basis(const DenseMatrix& B, const DenseMatrix* reuse_hint = nullptr);

struct CondensationOptions {
    // Compute the kernel basis on cell 0 only and reuse it everywhere; valid for constant A.
    bool share_basis = false;
    int threads = 1;
};

/// Throws SingularConstraint naming the first cell whose B fails the rank check.
LocalCondensation condense(const ConstraintBlock& constraints, const CondensationOptions& options = {});

/// A'_lm = M_l^T A_lm M_m and F'_l = M_l^T (F_l - sum_m A_lm u_m).
BlockSystem reduce_system(const BlockSystem& sys, const LocalCondensation& cond);

/// Full coefficients u^(l) + M^(l) U'^(l) per cell.
DGSolution reconstruct(std::span<const double> reduced, const LocalCondensation& cond, const std::vector<Point>& shifts);

} // namespace scsip
