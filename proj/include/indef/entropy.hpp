#pragma once

#include <functional>
#include <vector>

#include "indef/frame_lft.hpp"
#include "indef/parameter_functions.hpp"

namespace indef {

inline constexpr double kBoundaryBand = 1e-4;
inline constexpr double kRadialStep = 1e-7;

enum class IntegrandKind { SolutionOmegaStar, SolutionOmega, ParameterPsi, ContractionEHat, Custom };

struct QuadratureOptions {
    double tolerance = 1e-8;
    long max_nodes = 1L << 18;
    double min_panel = 1e-8;
    int initial_panels = 16;
};

struct EntropyValue {
    double value = 0.0;
    cplx lambda_tilde{};
    long nodes_used = 0;
    double error_estimate = 0.0;
    int singular_panels = 0;
    IntegrandKind integrand_kind = IntegrandKind::Custom;
};

/// Poisson kernel (1 - |l|^2) / |e^{i theta} - l|^2.
double poisson_kernel(double theta, cplx lambda_tilde);

/// (1/2pi) int_0^{2pi} P(theta, lambda_tilde) g(theta) d theta by adaptive
/// 16-point Gauss-Legendre panels. Non-finite values of g mark a singular
/// point: the enclosing panel is bisected down to options.min_panel, where it
/// is dropped and counted. Throws NoConvergence past options.max_nodes.
EntropyValue poisson_average(const std::function<double(double)>& g, cplx lambda_tilde,
                             const QuadratureOptions& options = {});

/// -(1/4pi) int P(theta, lambda_tilde) g(theta) d theta.
EntropyValue poisson_entropy(const std::function<double(double)>& boundary_log_det, cplx lambda_tilde,
                             const QuadratureOptions& options = {});

/// ln det of a Hermitian matrix; -inf when it is singular to within
/// 1e-6 ||H||, NonIntegrable when an eigenvalue is below -1e-6 ||H||.
double log_det_positive(const ComplexMatrix& h);

/// Boundary value of omega_star (or omega) at e^{i theta}: radial samples at
/// 1 - h and 1 - 2h with h = kRadialStep, combined by one Richardson step.
ComplexMatrix boundary_omega(const SolutionHandle& handle, double theta, bool star);

/// E_star(phi, l) with boundary data ln det Re omega_star, or E(phi, l) with Re omega.
EntropyValue entropy_of_solution(const SolutionHandle& handle, cplx lambda_tilde, bool star,
                                 const QuadratureOptions& options = {});

/// For a Nevanlinna parameter, boundary data ln det Im psi on the real line;
/// for a contraction, the functional -(1/4pi) int P ln det(I - phi^* phi).
/// The star variant uses the boundary point 2i (1 - e^{i theta}) / (1 + e^{i theta}).
EntropyValue entropy_of_parameter(const Parameter& param, cplx lambda_tilde, bool star,
                                  const QuadratureOptions& options = {});

/// q_tilde(l) = det(l^n (c psi + i d)(z(l))) through the scaled frame. At
/// l = 0 the closed form (-1)^{np} det(Y [iI; psi(2i)]) is returned.
/// Throws ParameterPole.
cplx q_tilde(const SolutionHandle& handle, cplx lambda);

/// The closed form at l = 0, independent of the frame.
cplx q_tilde_at_zero(const SolutionHandle& handle);

/// q_hat(l) = det(l^n (c_hat + d_hat phi)(z(l))).
cplx q_hat(const SolutionHandle& handle, cplx lambda);

/// q(l) = q_tilde(l) / (i (l + 1))^{pn}.
cplx q_function(const SolutionHandle& handle, cplx lambda);

struct DiskZero {
    cplx lambda{};
    int multiplicity = 1;
    double residual = 0.0;  // |f(lambda)| / max |f| on the search circle
};

struct DiskZeros {
    std::vector<DiskZero> zeros;  // sorted by modulus, then argument
    int total_count = 0;
    int distinct_count = 0;
    double search_radius = 0.0;
    int boundary_band_count = 0;  // zeros with search_radius <= |l| < 1 - 1e-9
    int attempts = 1;
};

struct ZeroFinderOptions {
    double search_radius = 1.0 - kBoundaryBand;
    int max_attempts = 5;
    double cluster_diameter = 1e-6;
};

/// Zeros of an analytic function in |l| < search_radius: argument-principle
/// counts on the circle and on nested annular sectors, Newton polish inside
/// cells with a single zero, multiplicities from the winding number of the
/// smallest enclosing cell. Throws ZeroOnContour after max_attempts
/// perturbations and CountMismatch when the located zeros do not account for
/// the outer winding number.
DiskZeros disk_zeros(const std::function<cplx(cplx)>& f, const ZeroFinderOptions& options = {});

/// Winding number of f around the circle |l| = r.
int winding_number(const std::function<cplx(cplx)>& f, double r);

/// prod_j ((l - l_j) / (1 - conj(l_j) l))^{m_j}.
cplx blaschke_eval(const DiskZeros& zeros, cplx lambda);

/// prod_j |l_j|^{-2 m_j}.
double blaschke_correction(const DiskZeros& zeros);

struct EntropyIdentityReport {
    cplx lambda_tilde{};
    // pair form at lambda_tilde
    double e_star_phi = 0.0;
    double e_star_psi = 0.0;
    double ln_q_tilde = 0.0;   // ln |q_tilde(-lambda_tilde)|
    double ln_b_tilde = 0.0;   // ln |B_tilde(-lambda_tilde)|
    double residual_pair = 0.0;
    // contractive form at -lambda_tilde, the same point of the same function
    double e_phi_hat = 0.0;
    double e_hat = 0.0;
    double ln_q_hat = 0.0;
    double ln_b_hat = 0.0;
    double residual_contractive = 0.0;
    double agreement = 0.0;    // |rhs_contractive - rhs_pair|
    double quadrature_error = 0.0;
};

/// Both representation formulas for the entropy of the solution.
EntropyIdentityReport entropy_identity_check(const SolutionHandle& handle, cplx lambda_tilde,
                                             const DiskZeros& zeros_tilde, const DiskZeros& zeros_hat,
                                             const QuadratureOptions& options = {});

/// Zeros of q_tilde and of q_hat in the disk.
DiskZeros q_tilde_zeros(const SolutionHandle& handle, const ZeroFinderOptions& options = {});
DiskZeros q_hat_zeros(const SolutionHandle& handle, const ZeroFinderOptions& options = {});

struct OuterCheck {
    double direct = 0.0;      // ln |D(l)|
    double poisson = 0.0;     // (1/2pi) int P ln |D(e^{i theta})|
    double residual = 0.0;
};

/// D = q_tilde / B_tilde, compared with the Poisson integral of ln |D| on the circle.
OuterCheck outer_poisson_check(const std::function<cplx(cplx)>& q, const DiskZeros& zeros, cplx lambda_tilde,
                               const QuadratureOptions& options = {});

}  // namespace indef
