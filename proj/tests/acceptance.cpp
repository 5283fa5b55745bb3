// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "scsip/assembly.hpp"
#include "scsip/condensation.hpp"
#include "scsip/convergence.hpp"
#include "scsip/errors.hpp"
#include "scsip/problem.hpp"
#include "scsip/quadrature.hpp"
#include "scsip/solve.hpp"

using namespace scsip;

namespace {

const std::vector<int> sweep_n = {4, 8, 16, 32};
const std::vector<int> degrees = {2, 3, 4};
const std::vector<std::string> cases = {"poisson-sin", "variable-a"};

struct RunResult {
    double l2 = 0.0;
    double h1 = 0.0;
    double residual = 0.0;
    std::size_t unknowns = 0;
    std::size_t cells = 0;
};

using RunKey = std::tuple<std::string, Method, int, int>; // case, method, k, n

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail)
{
    std::printf("[%s] criterion %2d: %s -- %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok)
        ++failures;
}

std::string fmt(const char* f, double a)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::map<RunKey, RunResult> run_sweeps(std::map<int, PolyMesh>& meshes)
{
    std::map<RunKey, RunResult> out;
    for (const auto& name : cases) {
        const ProblemSpec p = builtin_case(name);
        for (Method m : {Method::sip, Method::scsip})
            for (int k : degrees)
                for (int n : sweep_n) {
                    const PolyMesh& mesh = meshes.at(n);
                    const SolveReport r = run_method(m, mesh, k, default_penalty(k), p);
                    const ErrorNorms e = error_norms(r.solution, *p.exact, mesh);
                    out[{name, m, k, n}] = {e.l2, e.h1, r.residual, r.unknowns, mesh.num_cells()};
                }
    }
    return out;
}

void convergence_criterion(int id, const std::string& name, const std::map<RunKey, RunResult>& runs)
{
    bool ok = true;
    std::string detail;
    for (Method m : {Method::sip, Method::scsip})
        for (int k : degrees) {
            const int n0 = sweep_n[sweep_n.size() - 2], n1 = sweep_n.back();
            const RunResult& a = runs.at({name, m, k, n0});
            const RunResult& b = runs.at({name, m, k, n1});
            const double eoc_l2 = observed_order(a.l2, b.l2, 1.0 / n0, 1.0 / n1);
            const double eoc_h1 = observed_order(a.h1, b.h1, 1.0 / n0, 1.0 / n1);
            const bool pass = eoc_l2 >= (k + 1) - 0.2 && eoc_h1 >= k - 0.2;
            ok = ok && pass;
            char buf[128];
            std::snprintf(buf, sizeof buf, "%s%s k=%d L2 %.2f H1 %.2f", detail.empty() ? "" : "; ",
                          to_string(m).c_str(), k, eoc_l2, eoc_h1);
            detail += buf;
        }
    report(id, "convergence orders, " + name, ok, detail);
}

ProblemSpec patch_problem(int k)
{
    ProblemExpressions ex;
    ex.constant_A = true;
    switch (k) {
    case 2:
        ex.u = "x^2 + x*y - 2*y^2 + x - 1";
        ex.ux = "2*x + y + 1";
        ex.uy = "x - 4*y";
        ex.f = "2";
        break;
    case 3:
        ex.u = "x^3 - 3*x*y^2 + x^2*y";
        ex.ux = "3*x^2 - 3*y^2 + 2*x*y";
        ex.uy = "-6*x*y + x^2";
        ex.f = "-2*y";
        break;
    default:
        ex.u = "x^4 - y^4 + x^3*y + y^2";
        ex.ux = "4*x^3 + 3*x^2*y";
        ex.uy = "-4*y^3 + x^3 + 2*y";
        ex.f = "-(12*x^2 - 12*y^2 + 6*x*y + 2)";
        break;
    }
    ex.g = *ex.u;
    return problem_from_expressions(ex, "patch-k" + std::to_string(k));
}

double monomial_integral(int a, int b)
{
    return std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(a + b + 3.0));
}

} // namespace

int main()
{
    const auto start = std::chrono::steady_clock::now();
    std::map<int, PolyMesh> meshes;
    for (int n : sweep_n)
        meshes.emplace(n, build_mesh(n, HeMode::uniform));

    const auto runs = run_sweeps(meshes);

    // 1, 2
    convergence_criterion(1, "poisson-sin", runs);
    convergence_criterion(2, "variable-a", runs);

    // 3
    {
        double lo = 1e300, hi = 0.0;
        for (const auto& name : cases)
            for (int k : degrees)
                for (int n : sweep_n) {
                    const RunResult& s = runs.at({name, Method::sip, k, n});
                    const RunResult& c = runs.at({name, Method::scsip, k, n});
                    for (double r : {c.l2 / s.l2, c.h1 / s.h1}) {
                        lo = std::min(lo, r);
                        hi = std::max(hi, r);
                    }
                }
        report(3, "scSIP/SIP error ratios in [0.5, 2]", lo >= 0.5 && hi <= 2.0,
               fmt("min %.3f", lo) + fmt(", max %.3f", hi));
    }

    // 4
    {
        double worst = 0.0;
        for (const auto& name : cases) {
            const ProblemSpec p = builtin_case(name);
            for (int k : degrees)
                for (int n : {4, 8}) {
                    const PolyMesh& mesh = meshes.at(n);
                    const SolveReport sc = run_scsip(mesh, k, default_penalty(k), p);
                    const SolveReport sa = run_saddle_oracle(mesh, k, default_penalty(k), p);
                    worst = std::max(worst, l2_difference(sc.solution, sa.solution, mesh) / l2_norm(sa.solution, mesh));
                }
        }
        report(4, "saddle oracle agrees with scSIP", worst <= 1e-8, fmt("max relative L2 difference %.2e", worst));
    }

    // 5
    {
        double worst = 0.0;
        for (int k : degrees) {
            const ProblemSpec p = patch_problem(k);
            for (int n : {4, 8})
                for (Method m : {Method::sip, Method::scsip}) {
                    const PolyMesh& mesh = meshes.at(n);
                    const SolveReport r = run_method(m, mesh, k, default_penalty(k), p);
                    worst = std::max(worst, error_norms(r.solution, *p.exact, mesh).l2);
                }
        }
        report(5, "patch test with exact polynomial solutions", worst <= 1e-9, fmt("max L2 error %.2e", worst));
    }

    // 6
    {
        bool ok = true;
        std::size_t checked = 0;
        for (const auto& name : cases) {
            const ProblemSpec p = builtin_case(name);
            for (int k : degrees)
                for (int n : sweep_n) {
                    const ConstraintBlock cb = assemble_constraints(meshes.at(n), k, p);
                    for (const auto& B : cb.B) {
                        ok = ok && rank_svd(B, 1e-10) == poly_dim(k - 2);
                        ok = ok && static_cast<int>(kernel_basis(B).cols()) == 2 * k + 1;
                        ++checked;
                    }
                }
        }
        report(6, "full row rank constraints, kernel dimension 2k+1", ok,
               std::to_string(checked) + " cell matrices checked");
    }

    // 7
    {
        bool ok = true;
        double min_pivot = 1e300;
        for (const auto& name : cases) {
            const ProblemSpec p = builtin_case(name);
            for (int k : degrees)
                for (int n : sweep_n) {
                    try {
                        const LinearSolve s = solve_spd(assemble_sip(meshes.at(n), k, default_penalty(k), p));
                        min_pivot = std::min(min_pivot, s.min_pivot);
                        ok = ok && s.min_pivot > 0.0;
                    } catch (const NotPositiveDefinite&) {
                        ok = false;
                    }
                }
        }
        bool small_gamma_fails = false;
        for (int n : sweep_n) {
            try {
                solve_spd(assemble_sip(meshes.at(n), 2, 0.01, builtin_case("poisson-sin")));
            } catch (const NotPositiveDefinite&) {
                small_gamma_fails = true;
                break;
            }
        }
        report(7, "positive pivots at gamma = 2k(k+1), failure at gamma = 0.01", ok && small_gamma_fails,
               fmt("smallest equilibrated pivot %.2e", min_pivot) +
                   (small_gamma_fails ? ", not-positive-definite raised" : ", gamma = 0.01 did not fail"));
    }

    // 8
    {
        bool ok = true;
        double worst_residual = 0.0;
        for (const auto& [key, r] : runs) {
            const auto& [name, m, k, n] = key;
            const std::size_t expect = r.cells * static_cast<std::size_t>(m == Method::sip ? (k + 1) * (k + 2) / 2 : 2 * k + 1);
            ok = ok && r.unknowns == expect;
            worst_residual = std::max(worst_residual, r.residual);
        }
        ok = ok && worst_residual <= solve_residual_tol;
        report(8, "unknown counts N_e(k+1)(k+2)/2 and N_e(2k+1)", ok,
               std::to_string(runs.size()) + " runs, max relative residual " + fmt("%.1e", worst_residual));
    }

    // 9
    {
        double worst = 0.0;
        for (int d = 0; d <= max_triangle_degree; ++d) {
            const QuadRule& rule = triangle_rule(d);
            for (int a = 0; a <= rule.exact_degree; ++a)
                for (int b = 0; a + b <= rule.exact_degree; ++b) {
                    double s = 0.0;
                    for (std::size_t q = 0; q < rule.size(); ++q)
                        s += rule.weights[q] * std::pow(rule.points[q].x, a) * std::pow(rule.points[q].y, b);
                    const double exact = monomial_integral(a, b);
                    worst = std::max(worst, std::abs(s - exact) / exact);
                }
        }
        for (int d = 0; d <= 2 * max_triangle_degree + 1; ++d) {
            const QuadRule rule = segment_rule(d);
            for (int a = 0; a <= rule.exact_degree; a += 2) {
                double s = 0.0;
                for (std::size_t q = 0; q < rule.size(); ++q)
                    s += rule.weights[q] * std::pow(rule.points[q].x, a);
                const double exact = 2.0 / (a + 1);
                worst = std::max(worst, std::abs(s - exact) / exact);
            }
        }
        report(9, "quadrature exactness", worst <= 1e-13, fmt("max relative error %.2e", worst));
    }

    // 10
    {
        const PolyMesh& mesh = meshes.at(8);
        const ProblemSpec p = builtin_case("poisson-sin");
        SolveOptions shared, local;
        shared.share_kernel_basis = true;
        local.share_kernel_basis = false;
        const SolveReport a = run_scsip(mesh, 3, default_penalty(3), p, shared);
        const SolveReport b = run_scsip(mesh, 3, default_penalty(3), p, local);
        const double d = l2_difference(a.solution, b.solution, mesh);
        report(10, "shared kernel basis for constant A", d <= 1e-10, fmt("L2 difference %.2e", d));
    }

    // 11
    {
        const ProblemSpec p = builtin_case("poisson-sin");
        std::vector<double> norms;
        for (int n : {4, 8, 16}) {
            const PolyMesh& mesh = meshes.at(n);
            const SolveReport r = run_saddle_oracle(mesh, 2, default_penalty(2), p);
            norms.push_back(multiplier_norm(*r.multiplier, mesh));
        }
        const bool ok = norms[1] < norms[0] && norms[2] < norms[1];
        report(11, "multiplier norm decreases under refinement", ok,
               fmt("%.3e", norms[0]) + " -> " + fmt("%.3e", norms[1]) + " -> " + fmt("%.3e", norms[2]));
    }

    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d of 11 criteria failed (%.1f s)\n", failures, seconds);
    return failures == 0 ? 0 : 1;
}
