#pragma once

#include <functional>
#include <optional>
#include <string>

#include "scsip/geometry.hpp"

namespace scsip {

using ScalarField = std::function<double(Point)>;
using VectorField = std::function<Point(Point)>;

/// Symmetric diffusion tensor A(x) given entrywise; A21 is A12.
struct CoefficientField {
    ScalarField a11;
    ScalarField a12;
    ScalarField a22;

    SymTensor operator()(Point p) const { return {a11(p), a12(p), a22(p)}; }
};

struct ExactSolution {
    ScalarField u;
    VectorField grad;
};

/// Data of -div(A grad u) = f in the unit square, u = g on the boundary.
struct ProblemSpec {
    std::string name;
    CoefficientField A;
    ScalarField f;
    ScalarField g;
    std::optional<ExactSolution> exact;
    // Set when A is the same constant tensor everywhere; enables kernel-basis reuse.
    bool constant_coefficients = false;
};

/// "poisson-sin" or "variable-a"; throws ConfigError otherwise.
ProblemSpec builtin_case(const std::string& name);

/// Expression strings of a user-defined problem. u, ux, uy are optional as a group.
struct ProblemExpressions {
    std::string A11 = "1";
    std::string A12 = "0";
    std::string A22 = "1";
    std::string f;
    std::string g = "0";
    std::optional<std::string> u;
    std::optional<std::string> ux;
    std::optional<std::string> uy;
    bool constant_A = false;
};

ProblemSpec problem_from_expressions(const ProblemExpressions& src, std::string name = "custom");

/// Eigenvalue range of A over a sample grid of the unit square.
struct CoefficientBounds {
    double alpha = 0.0;       // smallest eigenvalue seen
    double beta = 0.0;        // largest eigenvalue seen
    double gradient_max = 0.0; // finite-difference estimate of max |grad A_ij|
    bool positive_definite = false;
};

CoefficientBounds sample_coefficient_bounds(const CoefficientField& A, int samples_per_side = 21);

/// Largest |-div(A grad u) - f| and |grad u - FD grad u| over interior sample points,
/// using central differences with the given step. Requires exact data.
struct ConsistencyReport {
    double pde_residual = 0.0;
    double gradient_residual = 0.0;
};

ConsistencyReport check_consistency(const ProblemSpec& problem, int samples = 50, double step = 1e-4,
                                    unsigned seed = 12345);

} // namespace scsip
