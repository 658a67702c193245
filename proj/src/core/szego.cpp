#include "indef/szego.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "indef/toeplitz_frame.hpp"

namespace indef {

namespace {

ToeplitzSpec leading_section(const ToeplitzSpec& spec, int i) {
    ToeplitzSpec out;
    out.p = spec.p;
    out.n = i;
    out.blocks.assign(spec.blocks.begin(), spec.blocks.begin() + i);
    out.nu = spec.nu;
    return out;
}

// Midpoint trapezoid nodes on the circle; theta = pi (z = infinity on the
// real line) is never a node.
double circle_mean(int nodes, const std::function<double(double)>& g) {
    double sum = 0.0;
    for (int k = 0; k < nodes; ++k) sum += g(2.0 * kPi * (k + 0.5) / nodes);
    return sum / nodes;
}

}  // namespace

std::vector<cplx> DeterminantSequence::ratios() const {
    std::vector<cplx> out;
    linalg::LogDet prev;
    for (const auto& d : dets) {
        out.push_back(std::exp(d.log_abs - prev.log_abs) * d.phase / prev.phase);
        prev = d;
    }
    return out;
}

DeterminantSequence determinant_sequence(const ToeplitzSpec& extended, int i_max) {
    if (i_max < 1 || i_max > extended.n) fail(ErrorCode::InvalidArgument, "i_max must lie in [1, n]");
    const ComplexMatrix full = assemble_toeplitz(extended);
    const int p = extended.p;
    DeterminantSequence seq;
    for (int i = 1; i <= i_max; ++i) {
        const ComplexMatrix s = full.topLeftCorner(i * p, i * p);
        const InertiaSummary in = inertia(s);
        if (in.ambiguous) {
            seq.truncated = true;
            seq.truncation_reason = "ambiguous inertia at i=" + std::to_string(i);
            break;
        }
        const linalg::LogDet det = linalg::log_determinant(s);
        if (!std::isfinite(det.log_abs) || det.log_abs < std::log(1e-300)) {
            seq.truncated = true;
            seq.truncation_reason = "determinant underflow at i=" + std::to_string(i);
            break;
        }
        seq.dets.push_back(det);
        seq.kappas.push_back(in.negative);
        seq.roundoff.push_back(std::numeric_limits<double>::epsilon() * s.norm() *
                               Eigen::PartialPivLU<ComplexMatrix>(s).inverse().norm());
    }
    return seq;
}

ToeplitzSpec solution_extension(const ToeplitzSpec& spec, const SolutionHandle& handle, int i_max) {
    if (i_max < spec.n) fail(ErrorCode::InvalidArgument, "i_max below the data order");
    const TaylorSeries series = taylor_coefficients_auto(handle, i_max);
    return build_extension(spec, series, i_max);
}

DeterminantSequence determinant_sequence(const ToeplitzSpec& spec, const SolutionHandle& handle, int i_max) {
    DeterminantSequence seq = determinant_sequence(solution_extension(spec, handle, i_max), i_max);
    if (static_cast<int>(seq.dets.size()) < spec.n)
        fail(ErrorCode::ConditioningBreakdown, "determinant sequence broke down inside the data: " + seq.truncation_reason);
    return seq;
}

ToeplitzSpec parameter_toeplitz(const HerglotzSpec& psi, int i_max) {
    auto omega = [&psi](cplx l) { return ComplexMatrix(-kI * eval_parameter_on_disk(psi, -l)); };
    const TaylorSeries series = taylor_coefficients(omega, i_max, kDefaultExtractionRadius);
    ToeplitzSpec out;
    out.p = psi.p();
    out.n = i_max;
    const ComplexMatrix& c0 = series.coeffs[0];
    out.blocks.push_back(c0 + c0.adjoint());
    out.nu = 0.5 * kI * (c0 - c0.adjoint());
    for (int k = 1; k < i_max; ++k) out.blocks.push_back(series.coeffs[k]);
    return out;
}

bool BridgeCheck::passes(double tol) const {
    for (std::size_t k = 0; k < residuals.size(); ++k)
        if (!(residuals[k] <= std::max(tol, roundoff[k]))) return false;
    return true;
}

int BridgeCheck::roundoff_limited(double tol) const {
    return static_cast<int>(std::count_if(roundoff.begin(), roundoff.end(), [tol](double r) { return r > tol; }));
}

BridgeCheck determinant_bridge(const ToeplitzSpec& extended, const DeterminantSequence& seq) {
    BridgeCheck out;
    linalg::LogDet prev;
    for (std::size_t k = 0; k < seq.dets.size(); ++k) {
        const int i = static_cast<int>(k) + 1;
        const linalg::LogDet& cur = seq.dets[k];
        const cplx expected = std::exp(prev.log_abs - cur.log_abs) * prev.phase / cur.phase;
        prev = cur;
        try {
            const StructuredTriple triple(leading_section(extended, i));
            const YMatrix y = last_row_frame(triple);
            const double r = std::abs(y.t.back().determinant() - expected) / std::abs(expected);
            out.sizes.push_back(i);
            out.residuals.push_back(r);
            out.roundoff.push_back(std::numeric_limits<double>::epsilon() * triple.S().norm() * triple.S_inv().norm());
            out.max_residual = std::isnan(r) || std::isnan(out.max_residual) ? NAN : std::max(out.max_residual, r);
        } catch (const Error& e) {
            const ErrorCode c = e.code();
            if (c != ErrorCode::SingularS && c != ErrorCode::AmbiguousInertia && c != ErrorCode::RankDeficientY) throw;
            ++out.skipped;
        }
    }
    return out;
}

SzegoPrediction predict_limit(const SolutionHandle& handle, const DiskZeros& zeros, const QuadratureOptions& options) {
    const int p = handle.p();
    const double two_p = std::pow(2.0, p);
    SzegoPrediction out;
    out.e_star_phi = entropy_of_solution(handle, 0.0, true, options).value;
    out.e_star_psi = entropy_of_parameter(Parameter(handle.herglotz()), 0.0, true, options).value;
    out.q_tilde_zero = q_tilde_at_zero(handle);
    out.blaschke_correction = blaschke_correction(zeros);
    out.classical = two_p * std::exp(-2.0 * out.e_star_psi);
    out.nonclassical = two_p * std::exp(-2.0 * out.e_star_phi) * out.blaschke_correction;
    out.via_q_tilde = out.classical / std::norm(out.q_tilde_zero);

    // Boundary values of phi on the real line x = 2 tan(theta / 2), straight
    // from the frame; no radial limit and no adaptive panels.
    const double mean_im_phi = circle_mean(kIntegralFormNodes, [&handle](double theta) {
        return log_det_positive(imaginary_part(eval_solution(handle, 2.0 * std::tan(0.5 * theta))));
    });
    out.integral_form = two_p * out.blaschke_correction * std::exp(mean_im_phi);
    const double mean_symbol = circle_mean(kIntegralFormNodes, [&handle](double theta) {
        return log_det_positive(2.0 * hermitian_part(eval_omega_star(handle, std::polar(1.0, theta))));
    });
    out.classical_symbol = std::exp(mean_symbol);
    out.forms_agreement = std::abs(out.integral_form - out.nonclassical) / out.nonclassical;
    return out;
}

SzegoReport szego_experiment(const ToeplitzSpec& spec, const SolutionHandle& handle, int i_max,
                             const SzegoOptions& options) {
    return szego_experiment(spec, solution_extension(spec, handle, i_max), handle, i_max, options);
}

SzegoReport szego_experiment(const ToeplitzSpec& spec, const ToeplitzSpec& ext, const SolutionHandle& handle,
                             int i_max, const SzegoOptions& options) {
    if (ext.n < i_max) fail(ErrorCode::InvalidArgument, "extension shorter than i_max");
    SzegoReport r;
    r.p = spec.p;
    r.kappa = handle.triple().kappa();
    r.i_max = i_max;
    r.tol_conv = options.tol_conv;

    const DeterminantSequence seq = determinant_sequence(ext, i_max);
    if (static_cast<int>(seq.dets.size()) < spec.n)
        fail(ErrorCode::ConditioningBreakdown, "determinant sequence broke down inside the data: " + seq.truncation_reason);
    r.truncated = seq.truncated;
    r.truncation_reason = seq.truncation_reason;
    r.bridge = determinant_bridge(ext, seq);

    r.zeros = q_tilde_zeros(handle);
    r.prediction = predict_limit(handle, r.zeros, options.quadrature);

    const std::vector<cplx> ratios = seq.ratios();
    for (std::size_t k = 0; k < ratios.size(); ++k) {
        r.sizes.push_back(static_cast<int>(k) + 1);
        r.ratios.push_back(ratios[k].real());
        r.max_ratio_imag = std::max(r.max_ratio_imag, std::abs(ratios[k].imag()) / std::abs(ratios[k].real()));
        r.relative_errors.push_back(std::abs(ratios[k].real() - r.prediction.nonclassical) / r.prediction.nonclassical);
    }

    const double expected_sign = r.kappa % 2 == 0 ? 1.0 : -1.0;
    r.sign_pattern = true;
    for (std::size_t k = spec.n - 1; k < seq.dets.size(); ++k)
        r.sign_pattern = r.sign_pattern && seq.dets[k].phase.real() * expected_sign > 0.0 &&
                         std::abs(seq.dets[k].phase.imag()) < 1e-8;

    const int available = static_cast<int>(ratios.size());
    for (int c = 8; c <= std::min(i_max, available); c *= 2) r.checkpoints.push_back(c);
    for (int c : r.checkpoints) {
        const double level = seq.roundoff[c - 1] + (c > 1 ? seq.roundoff[c - 2] : 0.0);
        r.noise_floors.push_back(std::max(kSzegoNoiseFloor, level));
    }
    r.monotone = true;
    for (std::size_t k = 1; k < r.checkpoints.size(); ++k) {
        const double prev = r.relative_errors[r.checkpoints[k - 1] - 1];
        const double cur = r.relative_errors[r.checkpoints[k] - 1];
        r.monotone = r.monotone && (cur <= prev || cur <= r.noise_floors[k]);
    }
    r.converged = !r.truncated && available == i_max && r.relative_errors.back() <= options.tol_conv && r.monotone;
    return r;
}

}  // namespace indef
