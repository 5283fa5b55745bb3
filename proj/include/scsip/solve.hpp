#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scsip/assembly.hpp"
#include "scsip/condensation.hpp"
#include "scsip/mesh.hpp"
#include "scsip/problem.hpp"

namespace scsip {

/// Relative residual every successful solve must reach.
inline constexpr double solve_residual_tol = 1e-12;

/// Penalty used throughout the experiments: 2k(k+1).
inline double default_penalty(int k) { return 2.0 * k * (k + 1); }

struct LinearSolve {
    Vector x;
    double residual = 0.0;   // |A x - F| / |F|, or |A x| when F = 0
    double min_pivot = 0.0;  // smallest pivot of the equilibrated symmetric factorization
};

/// Sparse LDL^T of the symmetric positive definite block system after diagonal
/// equilibration, followed by iterative refinement. Throws NotPositiveDefinite when a
/// pivot is not positive and SolverError when the residual target is missed.
LinearSolve solve_spd(const BlockSystem& sys);

enum class Method { sip, scsip, saddle };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct SolveOptions {
    int threads = 1;
    // Defaults to problem.constant_coefficients.
    std::optional<bool> share_kernel_basis;
    // Saddle oracle: weight constraint rows of cell T by h_T^2 (otherwise 1).
    bool weighted_constraints = true;
    // Saddle oracle: explicit per-cell row weights, overriding the two choices above.
    std::optional<std::vector<double>> constraint_weights;
};

struct SolveReport {
    Method method = Method::sip;
    std::size_t unknowns = 0;
    double residual = 0.0;
    double seconds = 0.0;
    DGSolution solution;
    // Saddle oracle only: multiplier of the h_T^2-weighted constraint form, degree k-2.
    std::optional<DGSolution> multiplier;
};

SolveReport run_sip(const PolyMesh& mesh, int k, double gamma, const ProblemSpec& problem,
                    const SolveOptions& options = {});
SolveReport run_scsip(const PolyMesh& mesh, int k, double gamma, const ProblemSpec& problem,
                      const SolveOptions& options = {});
/// Monolithic [[A, B~^T], [B~, 0]] solve with B~ the row-weighted constraint matrices.
SolveReport run_saddle_oracle(const PolyMesh& mesh, int k, double gamma, const ProblemSpec& problem,
                              const SolveOptions& options = {});

SolveReport run_method(Method method, const PolyMesh& mesh, int k, double gamma, const ProblemSpec& problem,
                       const SolveOptions& options = {});

/// Background mesh, agglomeration and topology for an n x n cell mesh.
PolyMesh build_mesh(int n, HeMode he_mode);

} // namespace scsip
