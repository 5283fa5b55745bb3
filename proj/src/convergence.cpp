#include "scsip/convergence.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "scsip/errors.hpp"

namespace scsip {

namespace {

std::string fmt16(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, sep))
        out.push_back(cur);
    if (!line.empty() && line.back() == sep)
        out.emplace_back();
    return out;
}

double to_double(const std::string& s)
{
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size())
        throw ConfigError("bad number '" + s + "' in csv");
    return v;
}

} // namespace

double observed_order(double e_prev, double e, double h_prev, double h)
{
    return std::log(e_prev / e) / std::log(h_prev / h);
}

std::vector<ConvergenceRow> run_convergence(const ProblemSpec& problem, const SweepConfig& config)
{
    if (!problem.exact)
        throw ConfigError("convergence sweep needs an exact solution");
    for (std::size_t i = 1; i < config.n_list.size(); ++i)
        if (config.n_list[i] <= config.n_list[i - 1])
            throw ConfigError("n list must be strictly ascending");
    const double gamma = config.gamma.value_or(default_penalty(config.k));
    std::vector<ConvergenceRow> rows;
    for (int n : config.n_list) {
        const PolyMesh mesh = build_mesh(n, config.he_mode);
        SolveOptions opt;
        opt.threads = config.threads;
        const SolveReport rep = run_method(config.method, mesh, config.k, gamma, problem, opt);
        const ErrorNorms err = error_norms(rep.solution, *problem.exact, mesh);
        ConvergenceRow row;
        row.n = n;
        row.h = 1.0 / n;
        row.method = to_string(config.method);
        row.k = config.k;
        row.dofs = rep.unknowns;
        row.l2_error = err.l2;
        row.h1_error = err.h1;
        if (!rows.empty()) {
            const auto& prev = rows.back();
            row.eoc_l2 = observed_order(prev.l2_error, row.l2_error, prev.h, row.h);
            row.eoc_h1 = observed_order(prev.h1_error, row.h1_error, prev.h, row.h);
        }
        rows.push_back(row);
    }
    return rows;
}

void emit_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out)
{
    out << csv_header << '\n';
    for (const auto& r : rows) {
        out << r.n << ',' << fmt16(r.h) << ',' << r.method << ',' << r.k << ',' << r.dofs << ',' << fmt16(r.l2_error)
            << ',' << fmt16(r.h1_error) << ',' << (r.eoc_l2 ? fmt16(*r.eoc_l2) : "") << ','
            << (r.eoc_h1 ? fmt16(*r.eoc_h1) : "") << '\n';
    }
}

std::vector<ConvergenceRow> parse_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != csv_header)
        throw ConfigError("csv header mismatch");
    std::vector<ConvergenceRow> rows;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto f = split(line, ',');
        if (f.size() != 9)
            throw ConfigError("csv row has " + std::to_string(f.size()) + " fields: " + line);
        ConvergenceRow r;
        r.n = std::stoi(f[0]);
        r.h = to_double(f[1]);
        r.method = f[2];
        r.k = std::stoi(f[3]);
        r.dofs = std::stoull(f[4]);
        r.l2_error = to_double(f[5]);
        r.h1_error = to_double(f[6]);
        if (!f[7].empty())
            r.eoc_l2 = to_double(f[7]);
        if (!f[8].empty())
            r.eoc_h1 = to_double(f[8]);
        rows.push_back(std::move(r));
    }
    return rows;
}

void emit_plotdata(const std::vector<ConvergenceRow>& rows, std::ostream& out)
{
    out << "# log10(h) log10(l2_error) log10(h1_error)\n";
    for (const auto& r : rows)
        out << fmt16(std::log10(r.h)) << ' ' << fmt16(std::log10(r.l2_error)) << ' ' << fmt16(std::log10(r.h1_error))
            << '\n';
}

} // namespace scsip
