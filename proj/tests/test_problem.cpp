#include "doctest.h"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "scsip/errors.hpp"
#include "scsip/expr.hpp"
#include "scsip/problem.hpp"

using namespace scsip;
using std::numbers::pi;

namespace {

struct Row {
    const char* src;
    std::function<double(double, double)> hand;
};

const std::vector<Row>& expression_table()
{
    static const std::vector<Row> rows = {
        {"1+x", [](double x, double) { return 1 + x; }},
        {"x*y", [](double x, double y) { return x * y; }},
        {"exp(x*y)", [](double x, double y) { return std::exp(x * y); }},
        {"2^3^2", [](double, double) { return 512.0; }},
        {"-x^2", [](double x, double) { return -(x * x); }},
        {"(-x)^2", [](double x, double) { return x * x; }},
        {"x-y-1", [](double x, double y) { return (x - y) - 1; }},
        {"x/y/2", [](double x, double y) { return (x / y) / 2; }},
        {"1 + 2*x - 3*y", [](double x, double y) { return 1 + 2 * x - 3 * y; }},
        {"sin(pi*x)*sin(pi*y)", [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); }},
        {"cos(x) + cos(y)", [](double x, double y) { return std::cos(x) + std::cos(y); }},
        {"2*pi^2*sin(pi*x)*sin(pi*y)",
         [](double x, double y) { return 2 * pi * pi * std::sin(pi * x) * std::sin(pi * y); }},
        {"1 + x", [](double x, double) { return 1 + x; }},
        {"x*y*(1+x)", [](double x, double y) { return x * y * (1 + x); }},
        {"1.5e-1 * x", [](double x, double) { return 0.15 * x; }},
        {"--x", [](double x, double) { return x; }},
        {"x^-1", [](double x, double) { return 1 / x; }},
        {"exp(-(x^2 + y^2))", [](double x, double y) { return std::exp(-(x * x + y * y)); }},
        {"2*x^3 - 3*x*y^2", [](double x, double y) { return 2 * x * x * x - 3 * x * y * y; }},
        {"((x))+((y))*.5", [](double x, double y) { return x + y * 0.5; }},
    };
    return rows;
}

} // namespace

TEST_CASE("expression examples")
{
    const Point p{0.5, 0.25};
    CHECK(parse_expr("1+x").eval(p) == 1.5);
    CHECK(parse_expr("x*y").eval(p) == 0.125);
    CHECK(parse_expr("exp(x*y)").eval(p) == doctest::Approx(1.1331484530668263).epsilon(1e-15));
}

TEST_CASE("expression table against hand evaluation")
{
    const std::vector<Row>& rows = expression_table();
    REQUIRE(rows.size() == 20);
    const std::vector<Point> points = {{0.5, 0.25}, {0.1, 0.9}, {-0.7, 0.3}, {1.25, -2.0}};
    for (const Row& r : rows) {
        CAPTURE(r.src);
        const Expr e = parse_expr(r.src);
        for (Point p : points) {
            const double expect = r.hand(p.x, p.y);
            CHECK(e.eval(p) == doctest::Approx(expect).epsilon(1e-14));
        }
    }
}

TEST_CASE("print then parse is idempotent")
{
    for (const Row& r : expression_table()) {
        CAPTURE(r.src);
        const std::string once = parse_expr(r.src).to_string();
        const std::string twice = parse_expr(once).to_string();
        CHECK(once == twice);
        const Point p{0.3, 0.7};
        CHECK(parse_expr(once).eval(p) == parse_expr(r.src).eval(p));
    }
}

TEST_CASE("parse errors carry a position")
{
    auto position_of = [](const char* src) -> long {
        try {
            parse_expr(src);
        } catch (const ParseError& e) {
            return static_cast<long>(e.position());
        }
        return -1;
    };
    CHECK(position_of("1+") == 2);
    CHECK(position_of("(x") == 2);
    CHECK(position_of("x $ y") == 2);
    CHECK(position_of("foo(x)") == 0);
    CHECK(position_of("z") == 0);
    CHECK(position_of("") == 0);
    CHECK(position_of("x y") == 2);
    CHECK(position_of("sin x") >= 0);
}

TEST_CASE("built-in cases")
{
    const ProblemSpec ps = builtin_case("poisson-sin");
    CHECK(ps.constant_coefficients);
    CHECK(ps.f({0.5, 0.5}) == doctest::Approx(2 * pi * pi).epsilon(1e-15));
    CHECK(ps.f({0.5, 0.5}) == doctest::Approx(19.7392).epsilon(1e-5));
    CHECK(ps.g({0.0, 0.3}) == 0.0);
    const SymTensor I = ps.A({0.2, 0.7});
    CHECK(I.xx == 1.0);
    CHECK(I.xy == 0.0);
    CHECK(I.yy == 1.0);

    const ProblemSpec va = builtin_case("variable-a");
    CHECK_FALSE(va.constant_coefficients);
    const SymTensor A = va.A({0.5, 0.5});
    CHECK(A.xx == 1.5);
    CHECK(A.xy == 0.25);
    CHECK(A.yy == 1.5);
    CHECK(va.g({0.3, 1.0}) == doctest::Approx(std::exp(0.3)).epsilon(1e-15));

    CHECK_THROWS_AS(builtin_case("nope"), ConfigError);
}

TEST_CASE("variable-a source matches a finite-difference operator")
{
    // -div(A grad u) for u = e^{xy}, A = [[1+x, xy], [xy, 1+y]], by nested central differences
    const ProblemSpec va = builtin_case("variable-a");
    auto u = [](double x, double y) { return std::exp(x * y); };
    auto flux = [&](double x, double y, double h) {
        const double ux = (u(x + h, y) - u(x - h, y)) / (2 * h);
        const double uy = (u(x, y + h) - u(x, y - h)) / (2 * h);
        return Point{(1 + x) * ux + x * y * uy, x * y * ux + (1 + y) * uy};
    };
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> d(0.05, 0.95);
    const double h = 1e-3;
    for (int i = 0; i < 30; ++i) {
        const double x = d(rng), y = d(rng);
        const double div = (flux(x + h, y, h).x - flux(x - h, y, h).x) / (2 * h) +
                           (flux(x, y + h, h).y - flux(x, y - h, h).y) / (2 * h);
        CHECK(std::abs(va.f({x, y}) + div) <= 1e-4);
    }
}

TEST_CASE("consistency self-test and coefficient bounds")
{
    for (const char* name : {"poisson-sin", "variable-a"}) {
        const ProblemSpec p = builtin_case(name);
        const ConsistencyReport r = check_consistency(p);
        CHECK(r.pde_residual <= 1e-4);
        CHECK(r.gradient_residual <= 1e-4);
        const CoefficientBounds b = sample_coefficient_bounds(p.A);
        CHECK(b.positive_definite);
        CHECK(b.alpha > 0.0);
        CHECK(b.beta >= b.alpha);
    }
    const CoefficientBounds id = sample_coefficient_bounds(builtin_case("poisson-sin").A);
    CHECK(id.alpha == doctest::Approx(1.0));
    CHECK(id.beta == doctest::Approx(1.0));

    ProblemExpressions bad;
    bad.f = "1";
    bad.A11 = "x - 0.5";
    const ProblemSpec indefinite = problem_from_expressions(bad);
    CHECK_FALSE(sample_coefficient_bounds(indefinite.A).positive_definite);
}

TEST_CASE("problems from expressions")
{
    ProblemExpressions ex;
    ex.f = "0";
    ex.g = "x^3 - 3*x*y^2";
    ex.u = "x^3 - 3*x*y^2";
    ex.ux = "3*x^2 - 3*y^2";
    ex.uy = "-6*x*y";
    ex.constant_A = true;
    const ProblemSpec p = problem_from_expressions(ex, "harmonic");
    CHECK(p.name == "harmonic");
    REQUIRE(p.exact);
    CHECK(p.constant_coefficients);
    const Point x{0.4, 0.7};
    CHECK(p.exact->u(x) == doctest::Approx(0.064 - 3 * 0.4 * 0.49));
    CHECK(p.exact->grad(x).y == doctest::Approx(-6 * 0.4 * 0.7));
    const ConsistencyReport r = check_consistency(p);
    CHECK(r.pde_residual <= 1e-4);
    CHECK(r.gradient_residual <= 1e-6);

    ProblemExpressions partial = ex;
    partial.uy.reset();
    CHECK_THROWS_AS(problem_from_expressions(partial), ConfigError);

    ProblemExpressions broken = ex;
    broken.f = "1 +* x";
    CHECK_THROWS_AS(problem_from_expressions(broken), ConfigError);
}
