#include "scsip/basis.hpp"

#include <string>

#include "scsip/errors.hpp"

namespace scsip {

MonomialBasis::MonomialBasis(int degree, Point shift) : degree_(degree), shift_(shift)
{
    if (degree < 0)
        throw InvalidArgument("MonomialBasis: negative degree " + std::to_string(degree));
    exponents_.reserve(poly_dim(degree));
    for (int i1 = 0; i1 <= degree; ++i1)
        for (int i2 = 0; i2 <= degree - i1; ++i2)
            exponents_.push_back({i1, i2});
}

int MonomialBasis::index_of(int i1, int i2) const
{
    // Entries preceding block i1: sum_{a<i1} (k - a + 1).
    return i1 * (degree_ + 1) - i1 * (i1 - 1) / 2 + i2;
}

void MonomialBasis::powers(Point x, std::vector<double>& px, std::vector<double>& py) const
{
    const double dx = x.x - shift_.x, dy = x.y - shift_.y;
    px.assign(degree_ + 1, 1.0);
    py.assign(degree_ + 1, 1.0);
    for (int p = 1; p <= degree_; ++p) {
        px[p] = px[p - 1] * dx;
        py[p] = py[p - 1] * dy;
    }
}

void MonomialBasis::values(Point x, std::span<double> out) const
{
    thread_local std::vector<double> px, py;
    powers(x, px, py);
    for (std::size_t i = 0; i < exponents_.size(); ++i)
        out[i] = px[exponents_[i][0]] * py[exponents_[i][1]];
}

void MonomialBasis::gradients(Point x, std::span<Point> out) const
{
    thread_local std::vector<double> px, py;
    powers(x, px, py);
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
        const auto [a, b] = exponents_[i];
        out[i].x = a > 0 ? a * px[a - 1] * py[b] : 0.0;
        out[i].y = b > 0 ? b * px[a] * py[b - 1] : 0.0;
    }
}

void MonomialBasis::hessians(Point x, std::span<SymTensor> out) const
{
    thread_local std::vector<double> px, py;
    powers(x, px, py);
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
        const auto [a, b] = exponents_[i];
        out[i].xx = a > 1 ? a * (a - 1) * px[a - 2] * py[b] : 0.0;
        out[i].xy = a > 0 && b > 0 ? a * b * px[a - 1] * py[b - 1] : 0.0;
        out[i].yy = b > 1 ? b * (b - 1) * px[a] * py[b - 2] : 0.0;
    }
}

} // namespace scsip
