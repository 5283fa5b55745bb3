#include "scsip/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "scsip/errors.hpp"

namespace scsip {

void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights)
{
    if (m < 1)
        throw InvalidArgument("gauss_legendre: need at least one point");
    nodes.assign(m, 0.0);
    weights.assign(m, 0.0);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= m; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_m(x), p0 = P_{m-1}(x)
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
}

namespace {

QuadRule collapsed_rule(int degree)
{
    // (u, v) in [0,1]^2 -> (u, v(1-u)); the Jacobian (1-u) raises the u-degree by one.
    std::vector<double> tu, wu, tv, wv;
    gauss_legendre((degree + 3) / 2, tu, wu);
    gauss_legendre((degree + 2) / 2, tv, wv);
    QuadRule rule;
    rule.exact_degree = degree;
    for (std::size_t i = 0; i < tu.size(); ++i) {
        const double u = 0.5 * (tu[i] + 1.0);
        for (std::size_t j = 0; j < tv.size(); ++j) {
            const double v = 0.5 * (tv[j] + 1.0);
            rule.points.push_back({u, v * (1.0 - u)});
            rule.weights.push_back(0.25 * wu[i] * wv[j] * (1.0 - u));
        }
    }
    return rule;
}

std::array<QuadRule, max_triangle_degree + 1> make_triangle_rules()
{
    std::array<QuadRule, max_triangle_degree + 1> rules;
    const QuadRule centroid{{{1.0 / 3.0, 1.0 / 3.0}}, {0.5}, 1};
    rules[0] = centroid;
    rules[0].exact_degree = 0;
    rules[1] = centroid;
    rules[2] = QuadRule{{{1.0 / 6.0, 1.0 / 6.0}, {2.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0}},
                        {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0},
                        2};
    for (int d = 3; d <= max_triangle_degree; ++d)
        rules[d] = collapsed_rule(d);
    return rules;
}

} // namespace

const QuadRule& triangle_rule(int degree)
{
    static const auto rules = make_triangle_rules();
    if (degree < 0 || degree > max_triangle_degree)
        throw UnsupportedDegree("triangle_rule: degree " + std::to_string(degree) + " not in [0, " +
                                std::to_string(max_triangle_degree) + "]");
    return rules[degree];
}

QuadRule segment_rule(int degree)
{
    if (degree < 0)
        throw UnsupportedDegree("segment_rule: negative degree");
    std::vector<double> t, w;
    gauss_legendre((degree + 2) / 2, t, w);
    QuadRule rule;
    rule.exact_degree = 2 * static_cast<int>(t.size()) - 1;
    for (std::size_t i = 0; i < t.size(); ++i) {
        rule.points.push_back({t[i], 0.0});
        rule.weights.push_back(w[i]);
    }
    return rule;
}

MappedRule map_to_triangle(const QuadRule& rule, Point a, Point b, Point c)
{
    const double jac = 2.0 * std::abs(signed_area(a, b, c));
    MappedRule out;
    out.points.reserve(rule.size());
    out.weights.reserve(rule.size());
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Point r = rule.points[q];
        out.points.push_back(a + r.x * (b - a) + r.y * (c - a));
        out.weights.push_back(rule.weights[q] * jac);
    }
    return out;
}

MappedRule map_to_segment(const QuadRule& rule, Point a, Point b)
{
    const double half = 0.5 * distance(a, b);
    MappedRule out;
    out.points.reserve(rule.size());
    out.weights.reserve(rule.size());
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const double s = 0.5 * (rule.points[q].x + 1.0);
        out.points.push_back(a + s * (b - a));
        out.weights.push_back(rule.weights[q] * half);
    }
    return out;
}

namespace {

Integral sum_rule(const ScalarFunction& f, const MappedRule& m)
{
    Integral r;
    for (std::size_t q = 0; q < m.points.size(); ++q)
        r.value += m.weights[q] * f(m.points[q]);
    return r;
}

} // namespace

Integral integrate_triangle(const ScalarFunction& f, Point a, Point b, Point c, const QuadRule& rule)
{
    if (signed_area(a, b, c) == 0.0)
        return {0.0, true};
    return sum_rule(f, map_to_triangle(rule, a, b, c));
}

Integral integrate_segment(const ScalarFunction& f, Point a, Point b, const QuadRule& rule)
{
    if (distance(a, b) == 0.0)
        return {0.0, true};
    return sum_rule(f, map_to_segment(rule, a, b));
}

} // namespace scsip
