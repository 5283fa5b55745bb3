#include "scsip/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "scsip/errors.hpp"
#include "scsip/expr.hpp"

namespace scsip {

namespace {

ProblemSpec poisson_sin()
{
    using std::numbers::pi;
    ProblemSpec p;
    p.name = "poisson-sin";
    p.A = {[](Point) { return 1.0; }, [](Point) { return 0.0; }, [](Point) { return 1.0; }};
    p.f = [](Point q) { return 2.0 * pi * pi * std::sin(pi * q.x) * std::sin(pi * q.y); };
    p.g = [](Point) { return 0.0; };
    p.exact = ExactSolution{
        [](Point q) { return std::sin(pi * q.x) * std::sin(pi * q.y); },
        [](Point q) {
            return Point{pi * std::cos(pi * q.x) * std::sin(pi * q.y), pi * std::sin(pi * q.x) * std::cos(pi * q.y)};
        }};
    p.constant_coefficients = true;
    return p;
}

ProblemSpec variable_a()
{
    ProblemSpec p;
    p.name = "variable-a";
    p.A = {[](Point q) { return 1.0 + q.x; }, [](Point q) { return q.x * q.y; }, [](Point q) { return 1.0 + q.y; }};
    // -div(A grad e^{xy}) expanded by hand.
    p.f = [](Point q) {
        const double x = q.x, y = q.y;
        return -std::exp(x * y) * (x * x + y * y + x * x * y + x * y * y + 2.0 * x * x * y * y + x + y + 4.0 * x * y);
    };
    p.g = [](Point q) { return std::exp(q.x * q.y); };
    p.exact = ExactSolution{[](Point q) { return std::exp(q.x * q.y); },
                            [](Point q) {
                                const double e = std::exp(q.x * q.y);
                                return Point{q.y * e, q.x * e};
                            }};
    return p;
}

ScalarField field(const std::string& src, const char* key)
{
    try {
        Expr e = parse_expr(src);
        return [e](Point p) { return e.eval(p); };
    } catch (const ParseError& err) {
        throw ConfigError(std::string(key) + ": " + err.what());
    }
}

} // namespace

ProblemSpec builtin_case(const std::string& name)
{
    if (name == "poisson-sin")
        return poisson_sin();
    if (name == "variable-a")
        return variable_a();
    throw ConfigError("unknown case '" + name + "' (expected poisson-sin or variable-a)");
}

ProblemSpec problem_from_expressions(const ProblemExpressions& src, std::string name)
{
    if (src.f.empty())
        throw ConfigError("problem definition needs a source term f");
    ProblemSpec p;
    p.name = std::move(name);
    p.A = {field(src.A11, "A11"), field(src.A12, "A12"), field(src.A22, "A22")};
    p.f = field(src.f, "f");
    p.g = field(src.g, "g");
    const bool any = src.u || src.ux || src.uy;
    if (any) {
        if (!(src.u && src.ux && src.uy))
            throw ConfigError("exact solution needs all of u, ux, uy");
        auto ux = field(*src.ux, "ux");
        auto uy = field(*src.uy, "uy");
        p.exact = ExactSolution{field(*src.u, "u"), [ux, uy](Point q) { return Point{ux(q), uy(q)}; }};
    }
    p.constant_coefficients = src.constant_A;
    return p;
}

CoefficientBounds sample_coefficient_bounds(const CoefficientField& A, int samples_per_side)
{
    CoefficientBounds b;
    b.alpha = std::numeric_limits<double>::infinity();
    b.beta = -std::numeric_limits<double>::infinity();
    const double step = 1e-6;
    for (int j = 0; j < samples_per_side; ++j) {
        for (int i = 0; i < samples_per_side; ++i) {
            const Point p{(i + 0.5) / samples_per_side, (j + 0.5) / samples_per_side};
            const SymTensor a = A(p);
            const double mean = 0.5 * (a.xx + a.yy);
            const double rad = std::hypot(0.5 * (a.xx - a.yy), a.xy);
            b.alpha = std::min(b.alpha, mean - rad);
            b.beta = std::max(b.beta, mean + rad);
            for (const ScalarField* entry : {&A.a11, &A.a12, &A.a22}) {
                const double gx = ((*entry)({p.x + step, p.y}) - (*entry)({p.x - step, p.y})) / (2 * step);
                const double gy = ((*entry)({p.x, p.y + step}) - (*entry)({p.x, p.y - step})) / (2 * step);
                b.gradient_max = std::max(b.gradient_max, std::hypot(gx, gy));
            }
        }
    }
    b.positive_definite = b.alpha > 0.0;
    return b;
}

ConsistencyReport check_consistency(const ProblemSpec& problem, int samples, double step, unsigned seed)
{
    if (!problem.exact)
        throw StateError("check_consistency requires an exact solution");
    const auto& ex = *problem.exact;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(0.05, 0.95);
    auto flux = [&](Point p) { return problem.A(p).apply(ex.grad(p)); };
    ConsistencyReport r;
    for (int s = 0; s < samples; ++s) {
        const Point p{dist(rng), dist(rng)};
        const double div = (flux({p.x + step, p.y}).x - flux({p.x - step, p.y}).x) / (2 * step) +
                           (flux({p.x, p.y + step}).y - flux({p.x, p.y - step}).y) / (2 * step);
        r.pde_residual = std::max(r.pde_residual, std::abs(-div - problem.f(p)));
        const double gx = (ex.u({p.x + step, p.y}) - ex.u({p.x - step, p.y})) / (2 * step);
        const double gy = (ex.u({p.x, p.y + step}) - ex.u({p.x, p.y - step})) / (2 * step);
        const Point g = ex.grad(p);
        r.gradient_residual = std::max(r.gradient_residual, std::hypot(gx - g.x, gy - g.y));
    }
    return r;
}

} // namespace scsip
