#include "scsip/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scsip/errors.hpp"

namespace scsip {

DenseMatrix DenseMatrix::identity(std::size_t n)
{
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::transpose() const
{
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

Vector DenseMatrix::column(std::size_t j) const
{
    Vector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        c[i] = (*this)(i, j);
    return c;
}

double DenseMatrix::frobenius_norm() const { return norm2(data_); }

double DenseMatrix::max_abs() const
{
    double m = 0.0;
    for (double v : data_)
        m = std::max(m, std::abs(v));
    return m;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other)
{
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw InvalidArgument("DenseMatrix +=: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += other.data_[i];
    return *this;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b)
{
    if (a.cols() != b.rows())
        throw InvalidArgument("DenseMatrix *: shape mismatch");
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0)
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) += aik * b(k, j);
        }
    return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InvalidArgument("DenseMatrix -: shape mismatch");
    DenseMatrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            c(i, j) -= b(i, j);
    return c;
}

Vector matvec(const DenseMatrix& a, std::span<const double> x)
{
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        y[i] = dot(a.row(i), x);
    return y;
}

Vector matvec_transposed(const DenseMatrix& a, std::span<const double> x)
{
    Vector y(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto r = a.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j)
            y[j] += r[j] * x[i];
    }
    return y;
}

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

ConstraintFactor::ConstraintFactor(const DenseMatrix& B, double rel_tol)
    : m_(B.rows()), n_(B.cols()), qr_(B.transpose()), beta_(B.rows(), 0.0), diag_(B.rows(), 0.0)
{
    if (m_ > n_)
        throw InvalidArgument("ConstraintFactor: more constraints than unknowns");
    for (std::size_t j = 0; j < m_; ++j) {
        double sq = 0.0;
        for (std::size_t i = j; i < n_; ++i)
            sq += qr_(i, j) * qr_(i, j);
        const double nrm = std::sqrt(sq);
        const double alpha = qr_(j, j) > 0.0 ? -nrm : nrm;
        qr_(j, j) -= alpha;
        const double vv = sq - 2.0 * alpha * (qr_(j, j) + alpha) + alpha * alpha;
        beta_[j] = vv > 0.0 ? 2.0 / vv : 0.0;
        diag_[j] = alpha;
        for (std::size_t c = j + 1; c < m_; ++c) {
            double s = 0.0;
            for (std::size_t i = j; i < n_; ++i)
                s += qr_(i, j) * qr_(i, c);
            s *= beta_[j];
            for (std::size_t i = j; i < n_; ++i)
                qr_(i, c) -= s * qr_(i, j);
        }
    }
    double dmax = 0.0;
    for (double d : diag_)
        dmax = std::max(dmax, std::abs(d));
    for (std::size_t j = 0; j < m_; ++j)
        if (!(std::abs(diag_[j]) > rel_tol * dmax))
            throw RankAnomaly("constraint matrix is rank deficient (pivot " + std::to_string(j) + ")");
}

void ConstraintFactor::apply_qt(Vector& v) const
{
    for (std::size_t j = 0; j < m_; ++j) {
        double s = 0.0;
        for (std::size_t i = j; i < n_; ++i)
            s += qr_(i, j) * v[i];
        s *= beta_[j];
        for (std::size_t i = j; i < n_; ++i)
            v[i] -= s * qr_(i, j);
    }
}

void ConstraintFactor::apply_q(Vector& v) const
{
    for (std::size_t jj = m_; jj-- > 0;) {
        double s = 0.0;
        for (std::size_t i = jj; i < n_; ++i)
            s += qr_(i, jj) * v[i];
        s *= beta_[jj];
        for (std::size_t i = jj; i < n_; ++i)
            v[i] -= s * qr_(i, jj);
    }
}

void ConstraintFactor::solve_r(std::span<double> x) const
{
    for (std::size_t ii = m_; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t j = ii + 1; j < m_; ++j)
            s -= qr_(ii, j) * x[j];
        x[ii] = s / diag_[ii];
    }
}

void ConstraintFactor::solve_rt(std::span<double> x) const
{
    for (std::size_t i = 0; i < m_; ++i) {
        double s = x[i];
        for (std::size_t j = 0; j < i; ++j)
            s -= qr_(j, i) * x[j];
        x[i] = s / diag_[i];
    }
}

ConstraintFactor::Solution ConstraintFactor::solve(std::span<const double> rhs_u, std::span<const double> rhs_c) const
{
    if (rhs_u.size() != n_ || rhs_c.size() != m_)
        throw InvalidArgument("ConstraintFactor::solve: size mismatch");
    // B^T = Q1 R. With w = Q^T rhs_u and t = R^{-T} rhs_c:
    //   R p = w1 - t,   u = Q [t; w2].
    Vector w(rhs_u.begin(), rhs_u.end());
    apply_qt(w);
    Vector t(rhs_c.begin(), rhs_c.end());
    solve_rt(t);
    Solution sol;
    sol.p.resize(m_);
    for (std::size_t i = 0; i < m_; ++i)
        sol.p[i] = w[i] - t[i];
    solve_r(sol.p);
    sol.u = std::move(w);
    std::copy(t.begin(), t.end(), sol.u.begin());
    apply_q(sol.u);
    return sol;
}

Vector ConstraintFactor::project_to_kernel(std::span<const double> v) const
{
    if (v.size() != n_)
        throw InvalidArgument("ConstraintFactor::project_to_kernel: size mismatch");
    Vector w(v.begin(), v.end());
    apply_qt(w);
    std::fill(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(m_), 0.0);
    apply_q(w);
    return w;
}

ConstraintFactor::Solution solve_saddle_dense(const DenseMatrix& B, std::span<const double> rhs_u,
                                              std::span<const double> rhs_c)
{
    return ConstraintFactor(B).solve(rhs_u, rhs_c);
}

std::vector<Vector> mgs_orthonormalize(const std::vector<Vector>& vectors, double drop_tol,
                                       std::optional<std::size_t> max_count)
{
    std::vector<Vector> basis;
    double largest = 0.0;
    for (const auto& v : vectors) {
        if (max_count && basis.size() >= *max_count)
            break;
        Vector w = v;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : basis) {
                const double c = dot(q, w);
                for (std::size_t i = 0; i < w.size(); ++i)
                    w[i] -= c * q[i];
            }
        const double nrm = norm2(w);
        const double reference = basis.empty() ? norm2(v) : largest;
        if (!(nrm > drop_tol * reference) || nrm == 0.0)
            continue;
        for (double& x : w)
            x /= nrm;
        basis.push_back(std::move(w));
        largest = std::max(largest, nrm);
    }
    return basis;
}

Vector singular_values(const DenseMatrix& m)
{
    // Orthogonalize the columns of the taller orientation.
    DenseMatrix a = m.rows() >= m.cols() ? m : m.transpose();
    const std::size_t rows = a.rows(), cols = a.cols();
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < cols; ++p)
            for (std::size_t q = p + 1; q < cols; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < rows; ++i) {
                    alpha += a(i, p) * a(i, p);
                    beta += a(i, q) * a(i, q);
                    gamma += a(i, p) * a(i, q);
                }
                if (gamma == 0.0)
                    continue;
                const double scale = std::sqrt(alpha * beta);
                off = std::max(off, std::abs(gamma) / scale);
                if (std::abs(gamma) <= 1e-16 * scale)
                    continue;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < rows; ++i) {
                    const double ap = a(i, p), aq = a(i, q);
                    a(i, p) = c * ap - s * aq;
                    a(i, q) = s * ap + c * aq;
                }
            }
        if (off <= 1e-15)
            break;
    }
    Vector sv(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows; ++i)
            s += a(i, j) * a(i, j);
        sv[j] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

int rank_svd(const DenseMatrix& m, double rel_tol)
{
    if (m.rows() == 0 || m.cols() == 0)
        return 0;
    const Vector sv = singular_values(m);
    if (sv.front() == 0.0)
        return 0;
    int r = 0;
    for (double s : sv)
        if (s > rel_tol * sv.front())
            ++r;
    return r;
}

Vector solve_spd_dense(const DenseMatrix& a, std::span<const double> b)
{
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n)
        throw InvalidArgument("solve_spd_dense: shape mismatch");
    DenseMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k)
            d -= l(j, k) * l(j, k);
        if (!(d > 0.0))
            throw NotPositiveDefinite("solve_spd_dense: non-positive pivot at row " + std::to_string(j));
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k)
                s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    Vector x(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k)
            x[i] -= l(i, k) * x[k];
        x[i] /= l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t k = ii + 1; k < n; ++k)
            x[ii] -= l(k, ii) * x[k];
        x[ii] /= l(ii, ii);
    }
    return x;
}

} // namespace scsip
