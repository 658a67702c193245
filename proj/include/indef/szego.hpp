#pragma once

#include <string>
#include <vector>

#include "indef/caratheodory.hpp"
#include "indef/entropy.hpp"
#include "indef/linalg.hpp"

namespace indef {

inline constexpr double kDefaultConvergenceTolerance = 1e-2;
/// Relative errors below this floor (or below the roundoff level of the
/// determinants, when larger) count as converged for the monotone check.
inline constexpr double kSzegoNoiseFloor = 1e-9;
inline constexpr int kIntegralFormNodes = 8192;

/// Lambda_i = det S(i), i = 1..size, from a fresh factorization per i.
struct DeterminantSequence {
    std::vector<linalg::LogDet> dets;
    std::vector<int> kappas;  // negative index of S(i)
    std::vector<double> roundoff;  // eps ||S(i)||_F ||S(i)^{-1}||_F
    bool truncated = false;
    std::string truncation_reason;

    /// Lambda_i / Lambda_{i-1} with Lambda_0 = 1, for i = 1..size.
    std::vector<cplx> ratios() const;
};

/// Determinants of the leading sections of a block Toeplitz matrix built from
/// spec. Stops (truncated) when the inertia of S(i) is ambiguous or the
/// determinant underflows.
DeterminantSequence determinant_sequence(const ToeplitzSpec& extended, int i_max);

/// The data followed by the Taylor coefficients c_n..c_{i_max-1} of omega_star.
ToeplitzSpec solution_extension(const ToeplitzSpec& spec, const SolutionHandle& handle, int i_max);

/// Determinants of the solution's extension. Throws ConditioningBreakdown if
/// fewer than spec.n determinants survive.
DeterminantSequence determinant_sequence(const ToeplitzSpec& spec, const SolutionHandle& handle, int i_max);

/// Toeplitz data generated by the parameter alone: the Taylor coefficients of
/// -i psi(2i (1 - l) / (1 + l)).
ToeplitzSpec parameter_toeplitz(const HerglotzSpec& psi, int i_max);

/// det t_{i,i} (last block of S(i)^{-1}, through the last-row recursion)
/// against Lambda_{i-1} / Lambda_i.
struct BridgeCheck {
    std::vector<int> sizes;
    std::vector<double> residuals;  // relative
    std::vector<double> roundoff;   // eps ||S(i)||_F ||S(i)^{-1}||_F
    int skipped = 0;                // S(i) too ill-conditioned for a triple
    double max_residual = 0.0;

    /// Each residual within max(tol, its roundoff level).
    bool passes(double tol) const;
    /// Sections whose roundoff level exceeds tol.
    int roundoff_limited(double tol) const;
};

BridgeCheck determinant_bridge(const ToeplitzSpec& extended, const DeterminantSequence& seq);

struct SzegoPrediction {
    double e_star_phi = 0.0;
    double e_star_psi = 0.0;
    cplx q_tilde_zero{};
    double blaschke_correction = 1.0;
    double classical = 0.0;          // 2^p exp(-2 E_star(psi, 0))
    double nonclassical = 0.0;       // 2^p exp(-2 E_star(phi, 0)) prod |l_j|^{-2}
    double via_q_tilde = 0.0;        // 2^p exp(-2 E_star(psi, 0)) / |q_tilde(0)|^2
    double integral_form = 0.0;      // 2^p prod |l_j|^{-2} exp((1/2pi) int ln det Im phi)
    double classical_symbol = 0.0;   // exp((1/2pi) int ln det 2 Re omega_star)
    double forms_agreement = 0.0;    // |integral_form - nonclassical| / nonclassical
};

SzegoPrediction predict_limit(const SolutionHandle& handle, const DiskZeros& zeros,
                              const QuadratureOptions& options = {});

struct SzegoOptions {
    double tol_conv = kDefaultConvergenceTolerance;
    QuadratureOptions quadrature{};
};

struct SzegoReport {
    int p = 0;
    int kappa = 0;
    int i_max = 0;
    std::vector<int> sizes;
    std::vector<double> ratios;
    double max_ratio_imag = 0.0;      // largest |Im| / |Re| among the ratios
    std::vector<double> relative_errors;
    std::vector<int> checkpoints;     // 8, 16, 32, ... up to i_max
    /// Error level a ratio can be trusted to at each checkpoint: the larger of
    /// kSzegoNoiseFloor and the roundoff levels of S(i) and S(i-1).
    std::vector<double> noise_floors;
    bool monotone = false;
    bool sign_pattern = false;        // sign Lambda_i = (-1)^kappa for i >= n
    bool converged = false;
    bool truncated = false;
    std::string truncation_reason;
    BridgeCheck bridge;
    DiskZeros zeros;
    SzegoPrediction prediction;
    double tol_conv = kDefaultConvergenceTolerance;
};

/// Ratios Lambda_i / Lambda_{i-1} for i <= i_max compared with the
/// nonclassical prediction. A report is returned even without convergence.
SzegoReport szego_experiment(const ToeplitzSpec& spec, const SolutionHandle& handle, int i_max,
                             const SzegoOptions& options = {});

/// Same, on an extension computed earlier (see solution_extension).
SzegoReport szego_experiment(const ToeplitzSpec& spec, const ToeplitzSpec& extension, const SolutionHandle& handle,
                             int i_max, const SzegoOptions& options = {});

}  // namespace indef
