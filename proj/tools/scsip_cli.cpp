// Command-line driver: mesh generation, single solves, convergence sweeps and the
// invariant checks.
//
// Exit codes: 0 success, 1 failed invariant check, 2 solver error, 3 configuration error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "scsip/assembly.hpp"
#include "scsip/condensation.hpp"
#include "scsip/convergence.hpp"
#include "scsip/errors.hpp"
#include "scsip/mesh.hpp"
#include "scsip/problem.hpp"
#include "scsip/solve.hpp"

namespace {

using namespace scsip;
using nlohmann::json;

constexpr int exit_check_failed = 1;
constexpr int exit_solver = 2;
constexpr int exit_config = 3;

struct Settings {
    std::string case_name;
    std::string config_path;
    std::string method = "sip";
    int k = 2;
    int n = 4;
    std::string n_list = "4,8,16,32";
    std::optional<double> gamma;
    std::string he_mode;
    int threads = 1;
    std::string out;
    std::string plot;
};

HeMode parse_he_mode(const std::string& s)
{
    if (s == "facet")
        return HeMode::facet;
    if (s == "uniform")
        return HeMode::uniform;
    throw ConfigError("unknown he-mode '" + s + "' (expected facet or uniform)");
}

std::vector<int> parse_n_list(const std::string& s)
{
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw ConfigError("bad entry '" + item + "' in n list");
        }
    }
    if (out.empty())
        throw ConfigError("empty n list");
    return out;
}

json load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config file: ") + e.what());
    }
}

std::optional<std::string> opt_string(const json& j, const char* key)
{
    if (!j.contains(key))
        return std::nullopt;
    if (j[key].is_number())
        return j[key].dump();
    return j[key].get<std::string>();
}

// Fills settings the command line left unset and returns the problem.
ProblemSpec resolve_problem(Settings& s, const CLI::App& cmd)
{
    json cfg = s.config_path.empty() ? json::object() : load_config(s.config_path);
    try {
        if (cfg.contains("method") && !cmd.count("--method"))
            s.method = cfg["method"].get<std::string>();
        if (cfg.contains("k") && !cmd.count("--k"))
            s.k = cfg["k"].get<int>();
        if (cfg.contains("n") && !cmd.count("--n"))
            s.n = cfg["n"].get<int>();
        if (cfg.contains("n_list") && !cmd.count("--n-list")) {
            std::string joined;
            for (const auto& v : cfg["n_list"])
                joined += (joined.empty() ? "" : ",") + std::to_string(v.get<int>());
            s.n_list = joined;
        }
        if (cfg.contains("gamma") && !cmd.count("--gamma"))
            s.gamma = cfg["gamma"].get<double>();
        if (cfg.contains("he_mode") && !cmd.count("--he-mode"))
            s.he_mode = cfg["he_mode"].get<std::string>();
        if (cfg.contains("threads") && !cmd.count("--threads"))
            s.threads = cfg["threads"].get<int>();

        if (!s.case_name.empty())
            return builtin_case(s.case_name);
        if (cfg.contains("case"))
            return builtin_case(cfg["case"].get<std::string>());
        if (cfg.contains("f")) {
            ProblemExpressions ex;
            if (auto v = opt_string(cfg, "A11"))
                ex.A11 = *v;
            if (auto v = opt_string(cfg, "A12"))
                ex.A12 = *v;
            if (auto v = opt_string(cfg, "A22"))
                ex.A22 = *v;
            ex.f = *opt_string(cfg, "f");
            if (auto v = opt_string(cfg, "g"))
                ex.g = *v;
            ex.u = opt_string(cfg, "u");
            ex.ux = opt_string(cfg, "ux");
            ex.uy = opt_string(cfg, "uy");
            ex.constant_A = cfg.value("constant_A", false);
            return problem_from_expressions(ex);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config file: ") + e.what());
    }
    throw ConfigError("no problem given: use --case or a config file with 'case' or expression keys");
}

void print_report(const SolveReport& r, const ProblemSpec& problem, const PolyMesh& mesh, int k, double gamma)
{
    std::printf("case        %s\n", problem.name.c_str());
    std::printf("method      %s\n", to_string(r.method).c_str());
    std::printf("k           %d\n", k);
    std::printf("cells       %zu\n", mesh.num_cells());
    std::printf("gamma       %.16g\n", gamma);
    std::printf("unknowns    %zu\n", r.unknowns);
    std::printf("residual    %.3e\n", r.residual);
    std::printf("seconds     %.3f\n", r.seconds);
    if (problem.exact) {
        const ErrorNorms e = error_norms(r.solution, *problem.exact, mesh);
        std::printf("l2_error    %.16g\n", e.l2);
        std::printf("h1_error    %.16g\n", e.h1);
    }
    if (r.multiplier)
        std::printf("p_norm_h    %.16g\n", multiplier_norm(*r.multiplier, mesh));
}

int cmd_mesh(const Settings& s)
{
    const HeMode mode = parse_he_mode(s.he_mode.empty() ? "facet" : s.he_mode);
    const PolyMesh mesh = build_mesh(s.n, mode);
    if (!s.out.empty()) {
        std::ofstream out(s.out);
        if (!out)
            throw ConfigError("cannot write " + s.out);
        write_mesh_json(mesh, out);
    }
    const QualityReport q = quality_report(mesh);
    std::printf("triangles   %zu\n", mesh.tri.num_triangles());
    std::printf("cells       %zu\n", mesh.num_cells());
    std::printf("facets      %zu\n", mesh.facets.size());
    std::printf("rho1_max    %.6f (upper estimate)\n", q.rho1_max);
    std::printf("rho2_max    %.6f\n", q.rho2_max);
    std::printf("rho3_max    %.6f\n", q.rho3_max);
    if (q.degenerate)
        std::printf("warning     degenerate cells present\n");
    return 0;
}

int cmd_solve(Settings& s, const CLI::App& cmd)
{
    const ProblemSpec problem = resolve_problem(s, cmd);
    const HeMode mode = parse_he_mode(s.he_mode.empty() ? "facet" : s.he_mode);
    const Method method = method_from_string(s.method);
    const double gamma = s.gamma.value_or(default_penalty(s.k));
    const PolyMesh mesh = build_mesh(s.n, mode);
    SolveOptions opt;
    opt.threads = s.threads;
    const SolveReport r = run_method(method, mesh, s.k, gamma, problem, opt);
    print_report(r, problem, mesh, s.k, gamma);
    return 0;
}

int cmd_convergence(Settings& s, const CLI::App& cmd)
{
    const ProblemSpec problem = resolve_problem(s, cmd);
    SweepConfig cfg;
    cfg.method = method_from_string(s.method);
    cfg.k = s.k;
    cfg.n_list = parse_n_list(s.n_list);
    cfg.gamma = s.gamma;
    cfg.he_mode = parse_he_mode(s.he_mode.empty() ? "uniform" : s.he_mode);
    cfg.threads = s.threads;
    const auto rows = run_convergence(problem, cfg);
    if (s.out.empty()) {
        emit_csv(rows, std::cout);
    } else {
        std::ofstream out(s.out);
        if (!out)
            throw ConfigError("cannot write " + s.out);
        emit_csv(rows, out);
    }
    if (!s.plot.empty()) {
        std::ofstream out(s.plot);
        if (!out)
            throw ConfigError("cannot write " + s.plot);
        emit_plotdata(rows, out);
    }
    return 0;
}

struct CheckLog {
    int failures = 0;
    void report(bool ok, const std::string& what)
    {
        std::printf("%s  %s\n", ok ? "PASS" : "FAIL", what.c_str());
        if (!ok)
            ++failures;
    }
};

std::string label(const std::string& name, int k, int n)
{
    return name + " k=" + std::to_string(k) + " n=" + std::to_string(n);
}

void check_one(CheckLog& log, const ProblemSpec& problem, int k, int n, HeMode mode, int threads)
{
    const std::string tag = label(problem.name, k, n);
    const PolyMesh mesh = build_mesh(n, mode);

    double area = 0.0;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c)
        area += mesh.cell_area(c);
    log.report(std::abs(area - 1.0) <= 1e-12, tag + ": cells partition the unit square");

    double perimeter = 0.0, facet_length = 0.0;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c)
        perimeter += mesh.cell_perimeter(c);
    for (const auto& f : mesh.facets)
        facet_length += (f.is_boundary() ? 1.0 : 2.0) * f.total_length();
    log.report(std::abs(perimeter - facet_length) <= 1e-12 * perimeter, tag + ": facet lengths match cell perimeters");

    const double gamma = default_penalty(k);
    const AssemblyOptions aopt{threads};
    const BlockSystem sys = assemble_sip(mesh, k, gamma, problem, aopt);
    log.report(sys.pattern_symmetric() && sys.symmetry_defect() <= 1e-12, tag + ": SIP matrix symmetric");

    const ConstraintBlock cb = assemble_constraints(mesh, k, problem, aopt);
    bool rank_ok = true;
    for (const auto& B : cb.B)
        rank_ok = rank_ok && rank_svd(B, constraint_rank_tol) == poly_dim(k - 2);
    log.report(rank_ok, tag + ": constraint matrices have full row rank");

    const LocalCondensation cond = condense(cb, {false, threads});
    bool kernel_ok = true;
    for (std::size_t c = 0; c < cond.kernel.size(); ++c) {
        const auto& M = cond.kernel[c];
        kernel_ok = kernel_ok && static_cast<int>(M.cols()) == kernel_dim(k);
        kernel_ok = kernel_ok && (cb.B[c] * M).max_abs() <= 1e-11 * cb.B[c].max_abs();
        kernel_ok = kernel_ok && (M.transpose() * M - DenseMatrix::identity(M.cols())).max_abs() <= 1e-12;
    }
    log.report(kernel_ok, tag + ": kernel bases orthonormal with dimension 2k+1");

    SolveOptions opt;
    opt.threads = threads;
    const SolveReport sc = run_scsip(mesh, k, gamma, problem, opt);
    const SolveReport sa = run_saddle_oracle(mesh, k, gamma, problem, opt);
    const double diff = l2_difference(sc.solution, sa.solution, mesh) / l2_norm(sa.solution, mesh);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2e", diff);
    log.report(diff <= 1e-8, tag + ": scSIP matches saddle-point oracle (rel. L2 diff " + buf + ")");
    log.report(sc.unknowns == mesh.num_cells() * static_cast<std::size_t>(kernel_dim(k)),
               tag + ": scSIP unknowns = cells * (2k+1)");
}

int cmd_check(Settings& s, const CLI::App& cmd)
{
    std::vector<ProblemSpec> problems;
    if (!s.case_name.empty() || !s.config_path.empty()) {
        problems.push_back(resolve_problem(s, cmd));
    } else {
        problems.push_back(builtin_case("poisson-sin"));
        problems.push_back(builtin_case("variable-a"));
    }
    const HeMode mode = parse_he_mode(s.he_mode.empty() ? "uniform" : s.he_mode);
    const std::vector<int> ks = cmd.count("--k") ? std::vector<int>{s.k} : std::vector<int>{2, 3, 4};
    const std::vector<int> ns = cmd.count("--n") ? std::vector<int>{s.n} : std::vector<int>{4, 8};
    CheckLog log;
    for (const auto& p : problems) {
        if (p.exact) {
            const ConsistencyReport cr = check_consistency(p);
            log.report(cr.pde_residual <= 1e-4 && cr.gradient_residual <= 1e-4,
                       p.name + ": exact solution consistent with f");
        }
        log.report(sample_coefficient_bounds(p.A).positive_definite, p.name + ": A positive definite on samples");
        for (int k : ks)
            for (int n : ns)
                check_one(log, p, k, n, mode, s.threads);
    }
    std::printf("%d failure(s)\n", log.failures);
    return log.failures == 0 ? 0 : exit_check_failed;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Interior penalty DG solver with static condensation on agglomerated polygonal meshes"};
    app.require_subcommand(1);
    Settings s;

    auto add_common = [&s](CLI::App* c) {
        c->add_option("--case", s.case_name, "Built-in case: poisson-sin or variable-a");
        c->add_option("--config", s.config_path, "JSON config file (case or A11/A12/A22/f/g/u/ux/uy)");
        c->add_option("--method", s.method, "sip, scsip or saddle");
        c->add_option("--k", s.k, "Polynomial degree (>= 2)");
        c->add_option("--gamma", s.gamma, "Penalty parameter (default 2k(k+1))");
        c->add_option("--he-mode", s.he_mode, "Facet length scale: facet or uniform");
        c->add_option("--threads", s.threads, "Worker threads for assembly and condensation");
    };

    auto* mesh = app.add_subcommand("mesh", "Build an n x n agglomerated mesh, write JSON, print quality report");
    mesh->add_option("--n", s.n, "Cells per side");
    mesh->add_option("--he-mode", s.he_mode, "Facet length scale: facet or uniform");
    mesh->add_option("--out", s.out, "Mesh JSON output file");

    auto* solve = app.add_subcommand("solve", "Solve one problem and print the report");
    add_common(solve);
    solve->add_option("--n", s.n, "Cells per side");

    auto* conv = app.add_subcommand("convergence", "Run a convergence sweep and write CSV");
    add_common(conv);
    conv->add_option("--n-list", s.n_list, "Comma-separated ascending cell counts per side");
    conv->add_option("--out", s.out, "CSV output file (default stdout)");
    conv->add_option("--plot", s.plot, "Plot-data output file");

    auto* check = app.add_subcommand("check", "Run the invariant checks");
    add_common(check);
    check->add_option("--n", s.n, "Cells per side (default 4 and 8)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try {
        if (*mesh)
            return cmd_mesh(s);
        if (*solve)
            return cmd_solve(s, *solve);
        if (*conv)
            return cmd_convergence(s, *conv);
        if (*check)
            return cmd_check(s, *check);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const UnsupportedDegree& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const Error& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return exit_solver;
    }
    return 0;
}
