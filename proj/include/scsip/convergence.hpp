#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scsip/mesh.hpp"
#include "scsip/problem.hpp"
#include "scsip/solve.hpp"

namespace scsip {

struct ConvergenceRow {
    int n = 0;
    double h = 0.0;
    std::string method;
    int k = 0;
    std::size_t dofs = 0;
    double l2_error = 0.0;
    double h1_error = 0.0;
    std::optional<double> eoc_l2;
    std::optional<double> eoc_h1;

    friend bool operator==(const ConvergenceRow&, const ConvergenceRow&) = default;
};

struct SweepConfig {
    Method method = Method::sip;
    int k = 2;
    std::vector<int> n_list;
    std::optional<double> gamma;   // defaults to 2k(k+1)
    HeMode he_mode = HeMode::uniform;
    int threads = 1;
};

/// log(e_prev / e) / log(h_prev / h)
double observed_order(double e_prev, double e, double h_prev, double h);

/// One row per n (ascending); the problem must carry an exact solution.
std::vector<ConvergenceRow> run_convergence(const ProblemSpec& problem, const SweepConfig& config);

inline constexpr const char* csv_header = "n,h,method,k,dofs,l2_error,h1_error,eoc_l2,eoc_h1";

void emit_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out);
std::vector<ConvergenceRow> parse_csv(std::istream& in);
/// Whitespace-separated columns: log10(h) log10(l2_error) log10(h1_error).
void emit_plotdata(const std::vector<ConvergenceRow>& rows, std::ostream& out);

} // namespace scsip
