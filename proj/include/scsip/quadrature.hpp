#pragma once

#include <functional>
#include <vector>

#include "scsip/geometry.hpp"

namespace scsip {

/// Quadrature rule on a reference region. Segment rules live on [-1, 1] and
/// use only the x coordinate; triangle rules live on {(0,0), (1,0), (0,1)}.
struct QuadRule {
    std::vector<Point> points;
    std::vector<double> weights;
    int exact_degree = 0;

    std::size_t size() const { return weights.size(); }
};

inline constexpr int max_triangle_degree = 10;

/// Positive-weight rule exact for bivariate polynomials of total degree <= degree.
/// Degrees 0-1 use the centroid, degree 2 the symmetric 3-point interior rule,
/// higher degrees a collapsed Gauss-Legendre product rule.
const QuadRule& triangle_rule(int degree);

/// Gauss-Legendre rule with ceil((degree+1)/2) points.
QuadRule segment_rule(int degree);

/// Nodes and weights of the m-point Gauss-Legendre rule on [-1, 1], ascending nodes.
void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights);

/// Physical quadrature points and weights (reference weight times Jacobian measure).
struct MappedRule {
    std::vector<Point> points;
    std::vector<double> weights;
};

MappedRule map_to_triangle(const QuadRule& rule, Point a, Point b, Point c);
MappedRule map_to_segment(const QuadRule& rule, Point a, Point b);

struct Integral {
    double value = 0.0;
    bool degenerate = false; // zero-measure region, value forced to 0
};

using ScalarFunction = std::function<double(Point)>;

Integral integrate_triangle(const ScalarFunction& f, Point a, Point b, Point c, const QuadRule& rule);
Integral integrate_segment(const ScalarFunction& f, Point a, Point b, const QuadRule& rule);

} // namespace scsip
