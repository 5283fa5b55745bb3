#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace scsip {

using Vector = std::vector<double>;

/// Row-major dense matrix for the small per-cell blocks (at most a few dozen rows).
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> data() const { return data_; }

    DenseMatrix transpose() const;
    Vector column(std::size_t j) const;
    double frobenius_norm() const;
    double max_abs() const;

    DenseMatrix& operator+=(const DenseMatrix& other);
    friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
    friend DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Vector matvec(const DenseMatrix& a, std::span<const double> x);
/// a^T x
Vector matvec_transposed(const DenseMatrix& a, std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

/// Householder QR of B^T for a full-row-rank m x n constraint matrix B (m <= n).
/// Solves the saddle system u + B^T p = rhs_u, B u = rhs_c and projects onto ker B.
class ConstraintFactor {
public:
    /// Throws RankAnomaly when a diagonal entry of R falls below rel_tol * max |R_ii|.
    explicit ConstraintFactor(const DenseMatrix& B, double rel_tol = 1e-13);

    std::size_t rows() const { return m_; }
    std::size_t cols() const { return n_; }

    struct Solution {
        Vector u;
        Vector p;
    };
    Solution solve(std::span<const double> rhs_u, std::span<const double> rhs_c) const;
    /// v minus its component in the row space of B.
    Vector project_to_kernel(std::span<const double> v) const;

private:
    void apply_q(Vector& v) const;          // v <- Q v
    void apply_qt(Vector& v) const;         // v <- Q^T v
    void solve_r(std::span<double> x) const;   // x <- R^{-1} x
    void solve_rt(std::span<double> x) const;  // x <- R^{-T} x

    std::size_t m_ = 0;
    std::size_t n_ = 0;
    DenseMatrix qr_;            // n x m, Householder vectors below the diagonal
    Vector beta_;
    Vector diag_;
};

/// Minimum-norm solve of u + B^T p = rhs_u, B u = rhs_c.
ConstraintFactor::Solution solve_saddle_dense(const DenseMatrix& B, std::span<const double> rhs_u,
                                              std::span<const double> rhs_c);

/// Modified Gram-Schmidt with one re-orthogonalization pass. A vector is dropped when its
/// norm after projection is below drop_tol times the largest norm retained so far (or its
/// own input norm, before anything is retained). Stops early once max_count vectors are kept.
std::vector<Vector> mgs_orthonormalize(const std::vector<Vector>& vectors, double drop_tol,
                                       std::optional<std::size_t> max_count = std::nullopt);

/// Singular values in descending order (one-sided Jacobi).
Vector singular_values(const DenseMatrix& m);

/// Number of singular values above rel_tol times the largest.
int rank_svd(const DenseMatrix& m, double rel_tol);

/// Cholesky solve for a small SPD matrix; throws NotPositiveDefinite on a non-positive pivot.
Vector solve_spd_dense(const DenseMatrix& a, std::span<const double> b);

} // namespace scsip
