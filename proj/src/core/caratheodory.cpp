#include "indef/caratheodory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace indef {

namespace {

struct CircleTransform {
    std::vector<ComplexMatrix> coeffs;
    double laurent_tail = 0.0;  // ||a_{-1}|| + ||a_{-2}|| scaled back to the circle
    double sample_scale = 0.0;  // max ||f|| on the circle
};

CircleTransform circle_transform(const std::function<ComplexMatrix(cplx)>& f, int m, double r, int nodes) {
    std::vector<ComplexMatrix> values;
    values.reserve(nodes);
    CircleTransform out;
    for (int j = 0; j < nodes; ++j) {
        values.push_back(f(std::polar(r, 2.0 * kPi * j / nodes)));
        out.sample_scale = std::max(out.sample_scale, values.back().norm());
    }
    const auto rows = values.front().rows();
    const auto cols = values.front().cols();
    // Direct DFT sums; the node count is small and the sum order is fixed.
    auto moment = [&](int k) {
        ComplexMatrix acc = ComplexMatrix::Zero(rows, cols);
        for (int j = 0; j < nodes; ++j) {
            const long long idx = ((static_cast<long long>(j) * k) % nodes + nodes) % nodes;
            acc += values[j] * std::polar(1.0, -2.0 * kPi * static_cast<double>(idx) / nodes);
        }
        return ComplexMatrix(acc / static_cast<double>(nodes));
    };
    out.coeffs.reserve(m);
    for (int k = 0; k < m; ++k) out.coeffs.push_back(moment(k) / std::pow(r, k));
    out.laurent_tail = moment(-1).norm() + moment(-2).norm();
    return out;
}

}  // namespace

TaylorSeries taylor_coefficients(const std::function<ComplexMatrix(cplx)>& f, int m, double radius, int nodes) {
    if (m <= 0) fail(ErrorCode::InvalidArgument, "coefficient count must be positive");
    if (!(radius > 0.1 && radius < 0.9)) fail(ErrorCode::InvalidArgument, "extraction radius must lie in (0.1, 0.9)");
    TaylorSeries out;
    out.radius = radius;
    out.confirmation_radius = kConfirmationRatio * radius;
    out.nodes = std::max({256, 8 * m, nodes});

    CircleTransform outer, inner;
    try {
        // A pole just outside the circle makes the trapezoid sums alias
        // slowly; double the nodes until the coefficients settle.
        outer = circle_transform(f, m, out.radius, out.nodes);
        while (out.nodes < kMaxExtractionNodes) {
            CircleTransform refined = circle_transform(f, m, out.radius, 2 * out.nodes);
            double largest = 0.0, change = 0.0;
            for (int k = 0; k < m; ++k) {
                largest = std::max(largest, refined.coeffs[k].norm());
                change = std::max(change, (refined.coeffs[k] - outer.coeffs[k]).norm());
            }
            outer = std::move(refined);
            out.nodes *= 2;
            if (change <= kAliasingTolerance * std::max(largest, 1e-300)) break;
        }
        inner = circle_transform(f, m, out.confirmation_radius, out.nodes);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::SolutionPole || e.code() == ErrorCode::DenominatorSingular)
            fail(ErrorCode::PoleInsideRadius, std::string("evaluation hit a pole: ") + e.what());
        throw;
    }
    for (const CircleTransform* t : {&outer, &inner})
        if (t->laurent_tail > 1e-8 * std::max(1.0, t->sample_scale))
            fail(ErrorCode::PoleInsideRadius, "nonzero negative Laurent coefficients on radius " +
                                                  std::to_string(t == &outer ? out.radius : out.confirmation_radius));

    double largest = 0.0;
    double diff = 0.0;
    for (int k = 0; k < m; ++k) {
        largest = std::max(largest, outer.coeffs[k].norm());
        diff = std::max(diff, (outer.coeffs[k] - inner.coeffs[k]).norm());
    }
    out.error_estimate = diff / std::max(largest, 1e-300);
    if (out.error_estimate > kExtractionTolerance)
        fail(ErrorCode::NonConvergent, "two-radius disagreement " + std::to_string(out.error_estimate));
    out.coeffs = std::move(outer.coeffs);
    return out;
}

TaylorSeries taylor_coefficients(const SolutionHandle& handle, int m, double radius) {
    return taylor_coefficients([&handle](cplx l) { return eval_omega_star(handle, l); }, m, radius);
}

TaylorSeries taylor_coefficients_auto(const SolutionHandle& handle, int m) {
    double radius = kDefaultExtractionRadius;
    for (;;) {
        try {
            return taylor_coefficients(handle, m, radius);
        } catch (const Error& e) {
            const bool retry = e.code() == ErrorCode::PoleInsideRadius || e.code() == ErrorCode::NonConvergent;
            if (!retry || kConfirmationRatio * radius <= 0.1) throw;
            radius *= kConfirmationRatio;
        }
    }
}

double extraction_radius(const std::vector<double>& pole_moduli) {
    double radius = kDefaultExtractionRadius;
    for (double rho : pole_moduli) radius = std::min(radius, 0.9 * rho);
    if (radius <= 0.1) fail(ErrorCode::PoleInsideRadius, "a pole of omega_star lies too close to the origin");
    return radius;
}

std::vector<double> coefficient_residuals(const ToeplitzSpec& spec, const TaylorSeries& series) {
    if (static_cast<int>(series.coeffs.size()) < spec.n)
        fail(ErrorCode::InvalidArgument, "series shorter than the data");
    std::vector<double> out;
    out.reserve(spec.n);
    for (int k = 0; k < spec.n; ++k) {
        const ComplexMatrix target = k == 0 ? ComplexMatrix(0.5 * spec.blocks[0] - kI * spec.nu) : spec.blocks[k];
        out.push_back((series.coeffs[k] - target).norm() / std::max(1.0, target.norm()));
    }
    return out;
}

ToeplitzSpec build_extension(const ToeplitzSpec& spec, const TaylorSeries& series, int n_tilde) {
    if (n_tilde < spec.n) fail(ErrorCode::InvalidArgument, "extension order below the data order");
    if (static_cast<int>(series.coeffs.size()) < n_tilde)
        fail(ErrorCode::InvalidArgument, "series has fewer than n_tilde coefficients");
    const std::vector<double> residuals = coefficient_residuals(spec, series);
    for (int k = 0; k < spec.n; ++k)
        if (residuals[k] > kExtractionTolerance)
            fail(ErrorCode::CoefficientMismatch,
                 "coefficient " + std::to_string(k) + " deviates by " + std::to_string(residuals[k]));
    ToeplitzSpec out = spec;
    out.n = n_tilde;
    for (int k = spec.n; k < n_tilde; ++k) out.blocks.push_back(series.coeffs[k]);
    return out;
}

ExtensionReport verify_extension(const ToeplitzSpec& spec, const TaylorSeries& series, int depth, int expected_kappa) {
    ExtensionReport report;
    report.base_n = spec.n;
    report.expected_kappa = expected_kappa;
    report.extraction_radius = series.radius;
    report.extraction_error = series.error_estimate;
    report.match_residuals = coefficient_residuals(spec, series);
    const ToeplitzSpec ext = build_extension(spec, series, spec.n + depth);
    const ComplexMatrix full = assemble_toeplitz(ext);
    const int p = spec.p;

    report.extended_n = spec.n;
    for (int i = spec.n; i <= spec.n + depth; ++i) {
        const ComplexMatrix s_i = full.topLeftCorner(i * p, i * p);
        const InertiaSummary in = inertia(s_i);
        if (in.ambiguous) {
            report.stopped_early = true;
            report.stop_reason = "ambiguous inertia at i=" + std::to_string(i);
            break;
        }
        const linalg::LogDet det = linalg::log_determinant(s_i);
        if (det.log_abs < std::log(1e-300)) {
            report.stopped_early = true;
            report.stop_reason = "determinant underflow at i=" + std::to_string(i);
            break;
        }
        report.sizes.push_back(i);
        report.kappas.push_back(in.negative);
        report.dets.push_back(det);
        report.extended_n = i;
    }
    bool ok = !report.kappas.empty();
    for (int k : report.kappas) ok = ok && k == expected_kappa;
    for (double r : report.match_residuals) ok = ok && r <= kExtractionTolerance;
    report.passed = ok;
    return report;
}

ExtensionReport verify_solution(const SolutionHandle& handle, const ToeplitzSpec& spec, int depth) {
    if (depth < 0) fail(ErrorCode::InvalidArgument, "depth must be nonnegative");
    const TaylorSeries series = taylor_coefficients_auto(handle, spec.n + depth);
    return verify_extension(spec, series, depth, handle.triple().kappa());
}

}  // namespace indef
