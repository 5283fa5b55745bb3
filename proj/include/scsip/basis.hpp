#pragma once

#include <array>
#include <span>
#include <vector>

#include "scsip/geometry.hpp"

namespace scsip {

/// Dimension of P_k in two variables; 0 for negative k.
constexpr int poly_dim(int k) { return k < 0 ? 0 : (k + 1) * (k + 2) / 2; }

/// Shifted monomials (x - s.x)^i1 (y - s.y)^i2, enumerated with i1 outer (0..k)
/// and i2 inner (0..k-i1).
class MonomialBasis {
public:
    MonomialBasis(int degree, Point shift);

    int degree() const { return degree_; }
    Point shift() const { return shift_; }
    int size() const { return static_cast<int>(exponents_.size()); }
    std::array<int, 2> exponents(int i) const { return exponents_[i]; }
    /// Position of the multi-index (i1, i2) in the enumeration.
    int index_of(int i1, int i2) const;

    void values(Point x, std::span<double> out) const;
    void gradients(Point x, std::span<Point> out) const;
    /// Hessians as (xx, xy, yy) triples.
    void hessians(Point x, std::span<SymTensor> out) const;

private:
    void powers(Point x, std::vector<double>& px, std::vector<double>& py) const;

    int degree_;
    Point shift_;
    std::vector<std::array<int, 2>> exponents_;
};

} // namespace scsip
