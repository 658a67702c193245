#pragma once

#include <functional>
#include <vector>

#include "indef/frame_lft.hpp"
#include "indef/linalg.hpp"
#include "indef/toeplitz_frame.hpp"

namespace indef {

inline constexpr double kExtractionTolerance = 1e-6;
inline constexpr double kDefaultExtractionRadius = 0.85;
inline constexpr double kConfirmationRatio = 0.8;
inline constexpr int kMaxExtractionNodes = 16384;
inline constexpr double kAliasingTolerance = 1e-14;

/// Taylor coefficients c_0..c_{m-1} of a matrix function on a disk.
struct TaylorSeries {
    std::vector<ComplexMatrix> coeffs;
    double radius = 0.0;
    double confirmation_radius = 0.0;
    int nodes = 0;
    /// max_k ||c_k(r) - c_k(r')|| / max_k ||c_k(r)||.
    double error_estimate = 0.0;
};

/// Trapezoidal Cauchy integrals on the circles |lambda| = radius and
/// kConfirmationRatio * radius. The node count starts at max(256, 8m) (or
/// `nodes` if larger) and doubles, up to kMaxExtractionNodes, until the
/// coefficients change by less than kAliasingTolerance relative.
/// A pole inside the circle is detected through the negative-index Laurent
/// coefficients. Throws PoleInsideRadius, NonConvergent.
TaylorSeries taylor_coefficients(const std::function<ComplexMatrix(cplx)>& f, int m, double radius, int nodes = 0);

/// Coefficients of omega_star for a solution handle.
TaylorSeries taylor_coefficients(const SolutionHandle& handle, int m, double radius);

/// Starts at kDefaultExtractionRadius and shrinks by kConfirmationRatio after
/// PoleInsideRadius or NonConvergent, down to radius 0.1.
TaylorSeries taylor_coefficients_auto(const SolutionHandle& handle, int m);

/// Largest admissible extraction radius given the moduli of the poles of
/// omega_star in the disk.
double extraction_radius(const std::vector<double>& pole_moduli);

/// ||c_0 - (s_0/2 - i nu)|| and ||c_k - s_k|| relative to max(1, ||s_k||).
std::vector<double> coefficient_residuals(const ToeplitzSpec& spec, const TaylorSeries& series);

/// The data s_0..s_{n_tilde-1}: the original s_0..s_{n-1} followed by the
/// extracted c_n..c_{n_tilde-1}. Throws CoefficientMismatch if the first n
/// coefficients deviate by more than kExtractionTolerance.
ToeplitzSpec build_extension(const ToeplitzSpec& spec, const TaylorSeries& series, int n_tilde);

struct ExtensionReport {
    int base_n = 0;
    int extended_n = 0;
    int expected_kappa = 0;
    std::vector<int> sizes;               // i = n, ..., extended_n
    std::vector<int> kappas;              // negative index of S(i)
    std::vector<linalg::LogDet> dets;     // Lambda_i = det S(i)
    std::vector<double> match_residuals;  // first-n coefficient residuals
    double extraction_radius = 0.0;
    double extraction_error = 0.0;
    bool stopped_early = false;
    std::string stop_reason;
    bool passed = false;
};

/// Extracts n + depth coefficients, extends, and tracks inertia and
/// determinants of S(i) for n <= i <= n + depth. Stops early on determinant
/// underflow or ambiguous inertia.
ExtensionReport verify_solution(const SolutionHandle& handle, const ToeplitzSpec& spec, int depth = 16);

/// Same, with a series already extracted.
ExtensionReport verify_extension(const ToeplitzSpec& spec, const TaylorSeries& series, int depth, int expected_kappa);

}  // namespace indef
