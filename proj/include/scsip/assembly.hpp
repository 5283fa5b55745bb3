#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "scsip/basis.hpp"
#include "scsip/linalg.hpp"
#include "scsip/mesh.hpp"
#include "scsip/problem.hpp"

namespace scsip {

/// Block-sparse symmetric matrix with one dense block per coupled cell pair, plus a
/// blocked right-hand side.
class BlockSystem {
public:
    BlockSystem() = default;
    BlockSystem(std::size_t num_cells, std::size_t block_size);

    std::size_t num_cells() const { return num_cells_; }
    std::size_t block_size() const { return block_size_; }
    std::size_t num_unknowns() const { return num_cells_ * block_size_; }

    /// Creates a zero block on first access.
    DenseMatrix& block(int row_cell, int col_cell);
    const DenseMatrix* find(int row_cell, int col_cell) const;
    const std::map<std::pair<int, int>, DenseMatrix>& blocks() const { return blocks_; }

    Vector& rhs(std::size_t cell) { return rhs_[cell]; }
    const Vector& rhs(std::size_t cell) const { return rhs_[cell]; }
    Vector rhs_flat() const;

    Vector apply(std::span<const double> x) const;
    /// max over blocks of |A_lm - A_ml^T|_F / |A_lm|_F (0 for exact symmetry).
    double symmetry_defect() const;
    /// True when (l, m) present iff (m, l) present.
    bool pattern_symmetric() const;

private:
    std::size_t num_cells_ = 0;
    std::size_t block_size_ = 0;
    std::map<std::pair<int, int>, DenseMatrix> blocks_;
    std::vector<Vector> rhs_;
};

/// Cellwise polynomial in the shifted monomial basis of each cell.
struct DGSolution {
    int degree = 0;
    std::vector<Point> shifts;
    std::vector<Vector> coeffs;

    std::size_t num_cells() const { return coeffs.size(); }
    double value(std::size_t cell, Point x) const;
    Point gradient(std::size_t cell, Point x) const;
};

DGSolution make_solution(const PolyMesh& mesh, int k, std::span<const double> flat);
/// Cellwise L2 projection onto P_k; reproduces u exactly when u is a polynomial of degree <= k.
DGSolution l2_project(const PolyMesh& mesh, int k, const ScalarField& u);

/// Constraint matrices B (N_{k-2} x N_k, entries int psi_i L phi_j) and loads int f psi_i.
struct ConstraintBlock {
    int degree = 0;
    std::vector<DenseMatrix> B;
    std::vector<Vector> F_psi;
};

struct AssemblyOptions {
    int threads = 1;
};

inline int volume_quadrature_degree(int k) { return 2 * k + 2; }
inline int edge_quadrature_degree(int k) { return 2 * k + 3; }

/// Symmetric interior penalty matrix and load vector.
BlockSystem assemble_sip(const PolyMesh& mesh, int k, double gamma, const ProblemSpec& problem,
                         const AssemblyOptions& options = {});

ConstraintBlock assemble_constraints(const PolyMesh& mesh, int k, const ProblemSpec& problem,
                                     const AssemblyOptions& options = {});

struct ErrorNorms {
    double l2 = 0.0;
    double h1 = 0.0; // broken H1 seminorm
};

ErrorNorms error_norms(const DGSolution& sol, const ExactSolution& exact, const PolyMesh& mesh);

/// L2 norm of the difference of two cellwise solutions on the same mesh.
double l2_difference(const DGSolution& a, const DGSolution& b, const PolyMesh& mesh);
double l2_norm(const DGSolution& a, const PolyMesh& mesh);

/// (sum_T |v|_{H1(T)}^2 + h_T^{-1} |[v]|_{L2(dT)}^2)^{1/2}, with [v] = v on the boundary.
double triple_norm(const DGSolution& sol, const PolyMesh& mesh);

/// (sum_T h_T^2 |q|_{L2(T)}^2)^{1/2} for cellwise polynomials of degree k-2.
double multiplier_norm(const DGSolution& q, const PolyMesh& mesh);

} // namespace scsip
