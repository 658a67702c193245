#include "indef/entropy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "indef/linalg.hpp"
#include "indef/toeplitz_frame.hpp"

namespace indef {

namespace {

constexpr double kTwoPi = 2.0 * kPi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Gauss16 = boost::math::quadrature::gauss<double, 16>;

struct PanelSum {
    double value = 0.0;
    bool finite = true;
};

class PoissonIntegrator {
public:
    PoissonIntegrator(const std::function<double(double)>& g, cplx lambda_tilde, const QuadratureOptions& options)
        : g_(g), lambda_(lambda_tilde), options_(options) {}

    EntropyValue run() {
        const int panels = std::max(1, options_.initial_panels);
        double total = 0.0;
        for (int k = 0; k < panels; ++k) {
            const double a = kTwoPi * k / panels;
            const double b = kTwoPi * (k + 1) / panels;
            total += adapt(a, b, panel(a, b));
        }
        EntropyValue out;
        out.value = total / kTwoPi;
        out.lambda_tilde = lambda_;
        out.nodes_used = nodes_;
        out.error_estimate = error_ / kTwoPi;
        out.singular_panels = singular_;
        return out;
    }

private:
    PanelSum panel(double a, double b) {
        const auto& x = Gauss16::abscissa();
        const auto& w = Gauss16::weights();
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        PanelSum out;
        for (std::size_t k = 0; k < x.size(); ++k) {
            for (const double sign : {-1.0, 1.0}) {
                const double theta = mid + sign * half * x[k];
                const double v = poisson_kernel(theta, lambda_) * g_(theta);
                if (!std::isfinite(v)) out.finite = false;
                else out.value += w[k] * half * v;
            }
        }
        nodes_ += 2 * static_cast<long>(x.size());
        if (nodes_ > options_.max_nodes)
            fail(ErrorCode::NoConvergence, "Poisson quadrature exceeded " + std::to_string(options_.max_nodes) + " nodes");
        return out;
    }

    double adapt(double a, double b, const PanelSum& whole) {
        const double width = b - a;
        if (width < options_.min_panel) {
            if (!whole.finite) {
                ++singular_;
                return 0.0;
            }
            return whole.value;
        }
        const double mid = 0.5 * (a + b);
        const PanelSum left = panel(a, mid);
        const PanelSum right = panel(mid, b);
        if (whole.finite && left.finite && right.finite) {
            const double refined = left.value + right.value;
            const double diff = std::abs(refined - whole.value);
            if (diff <= options_.tolerance * width / kTwoPi) {
                error_ += diff;
                return refined;
            }
        }
        return adapt(a, mid, left) + adapt(mid, b, right);
    }

    const std::function<double(double)>& g_;
    cplx lambda_;
    QuadratureOptions options_;
    long nodes_ = 0;
    double error_ = 0.0;
    int singular_ = 0;
};

// Real boundary point z(e^{i theta}) or, for the star variant, z(-e^{i theta}).
double boundary_point(double theta, bool star) {
    const cplx z = cayley(star ? -std::polar(1.0, theta) : std::polar(1.0, theta));
    return z.real();
}

double log_abs(cplx v) { return std::log(std::abs(v)); }

double contraction_log_det(const ComplexMatrix& phi) {
    return log_det_positive(identity(static_cast<int>(phi.rows())) - phi.adjoint() * phi);
}

// E_hat(phi, l) = -(1/4pi) int P ln det(I - phi^* phi) over phi on the real line.
EntropyValue contraction_entropy(const SolutionHandle& handle, cplx lambda_tilde, const QuadratureOptions& options) {
    auto g = [&handle](double theta) {
        try {
            return contraction_log_det(handle.contraction_at(boundary_point(theta, false)));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::PoleProximity || e.code() == ErrorCode::BoundaryPole) return kNaN;
            throw;
        }
    };
    EntropyValue v = poisson_entropy(g, lambda_tilde, options);
    v.integrand_kind = IntegrandKind::ContractionEHat;
    return v;
}

// ---- contour machinery for the zero finder -------------------------------

class ContourWalker {
public:
    ContourWalker(const std::function<cplx(cplx)>& f, double scale) : f_(f), scale_(scale) {}

    // Total change of arg f along gamma(t), t in [0, 1].
    double arg_change(const std::function<cplx(double)>& gamma, int samples) {
        double total = 0.0;
        double t0 = 0.0;
        cplx f0 = eval(gamma(0.0));
        for (int k = 1; k <= samples; ++k) {
            const double t1 = static_cast<double>(k) / samples;
            const cplx f1 = eval(gamma(t1));
            total += refine(gamma, t0, f0, t1, f1, 0);
            t0 = t1;
            f0 = f1;
        }
        return total;
    }

private:
    cplx eval(cplx z) {
        const cplx v = f_(z);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) <= 1e-13 * scale_)
            fail(ErrorCode::ZeroOnContour, "function vanishes on the contour near " + std::to_string(z.real()) + "+" +
                                               std::to_string(z.imag()) + "i");
        return v;
    }

    double refine(const std::function<cplx(double)>& gamma, double t0, cplx f0, double t1, cplx f1, int depth) {
        const double d = std::arg(f1 / f0);
        if (std::abs(d) <= kPi / 4.0) return d;
        if (depth > 40 || t1 - t0 < 1e-13) fail(ErrorCode::ZeroOnContour, "argument change unresolved on the contour");
        const double tm = 0.5 * (t0 + t1);
        const cplx fm = eval(gamma(tm));
        return refine(gamma, t0, f0, tm, fm, depth + 1) + refine(gamma, tm, fm, t1, f1, depth + 1);
    }

    const std::function<cplx(cplx)>& f_;
    double scale_;
};

struct Cell {
    bool disk = false;
    double r0 = 0.0, r1 = 0.0, a0 = 0.0, a1 = 0.0;

    double diameter() const {
        if (disk) return 2.0 * r1;
        const double da = a1 - a0;
        const double chord = da >= kPi ? 2.0 * r1 : 2.0 * r1 * std::sin(0.5 * da);
        return std::max(r1 - r0, chord) + (r1 - r0);
    }

    cplx center() const {
        if (disk) return 0.0;
        return std::polar(0.5 * (r0 + r1), 0.5 * (a0 + a1));
    }

    bool contains(cplx z, double slack) const {
        const double r = std::abs(z);
        if (disk) return r <= r1 + slack;
        if (r < r0 - slack || r > r1 + slack) return false;
        if (r <= slack) return true;
        double a = std::arg(z);
        while (a < a0 - kPi) a += kTwoPi;
        while (a > a0 + kPi) a -= kTwoPi;
        if (a < a0) a += kTwoPi;
        // arc-length slack
        const double tol = slack / std::max(r, 1e-12);
        return a <= a1 + tol || std::abs(a - kTwoPi - a0) <= tol;
    }
};

class ZeroSearch {
public:
    ZeroSearch(const std::function<cplx(cplx)>& f, double scale, const ZeroFinderOptions& options)
        : f_(f), walker_(f, scale), scale_(scale), options_(options) {}

    int count(const Cell& c) {
        double total = 0.0;
        constexpr int kSamples = 48;
        if (c.disk) {
            total = walker_.arg_change([&](double t) { return std::polar(c.r1, kTwoPi * t); }, 4 * kSamples);
        } else {
            total += walker_.arg_change([&](double t) { return std::polar(c.r1, c.a0 + t * (c.a1 - c.a0)); }, kSamples);
            total += walker_.arg_change([&](double t) { return std::polar(c.r1 + t * (c.r0 - c.r1), c.a1); }, kSamples);
            total += walker_.arg_change([&](double t) { return std::polar(c.r0, c.a1 + t * (c.a0 - c.a1)); }, kSamples);
            total += walker_.arg_change([&](double t) { return std::polar(c.r0 + t * (c.r1 - c.r0), c.a0); }, kSamples);
        }
        const double turns = total / kTwoPi;
        const double rounded = std::round(turns);
        if (std::abs(turns - rounded) > 0.2) fail(ErrorCode::ZeroOnContour, "non-integer winding number");
        return static_cast<int>(rounded);
    }

    void search(const Cell& cell, int k, int depth) {
        if (k <= 0) return;
        if (k == 1 && cell.diameter() < 0.25) {
            DiskZero z;
            if (newton(cell.center(), 1, z) && cell.contains(z.lambda, 1e-9)) {
                found_.push_back(z);
                return;
            }
        }
        if (cell.diameter() < options_.cluster_diameter || depth > 60) {
            record_cluster(cell, k);
            return;
        }
        // Retry the split at shifted fractions when a zero sits on a new edge.
        static constexpr std::array<double, 5> kFractions = {0.5, 0.4871, 0.5213, 0.4637, 0.5389};
        std::vector<Cell> parts;
        std::vector<int> counts;
        for (std::size_t attempt = 0;; ++attempt) {
            try {
                parts = split(cell, kFractions[attempt]);
                counts.clear();
                int sum = 0;
                for (const Cell& part : parts) {
                    counts.push_back(count(part));
                    sum += counts.back();
                }
                if (sum != k) fail(ErrorCode::ZeroOnContour, "child winding numbers do not add up");
                break;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::ZeroOnContour) throw;
                if (attempt + 1 < kFractions.size()) continue;
                // Near a multiple zero |f| falls below the contour threshold on
                // every split line of a small cell; the cell's count still holds.
                if (cell.diameter() < 1e3 * options_.cluster_diameter) {
                    record_cluster(cell, k);
                    return;
                }
                throw;
            }
        }
        for (std::size_t i = 0; i < parts.size(); ++i) search(parts[i], counts[i], depth + 1);
    }

    std::vector<DiskZero> take() { return std::move(found_); }

private:
    void record_cluster(const Cell& cell, int k) {
        DiskZero z;
        newton(cell.center(), k, z);
        if (!cell.contains(z.lambda, cell.diameter())) z.lambda = cell.center();
        z.multiplicity = k;
        found_.push_back(z);
    }

    static std::vector<Cell> split(const Cell& c, double frac) {
        std::vector<Cell> out;
        if (c.disk) {
            const double rm = frac * c.r1;
            Cell inner;
            inner.disk = true;
            inner.r1 = rm;
            out.push_back(inner);
            // Sector edges stay off the coordinate axes, where zeros of real
            // symmetric data tend to sit, and move with the split fraction.
            const double offset = 0.0123 + 2.0 * (frac - 0.5);
            for (int q = 0; q < 4; ++q) {
                Cell s;
                s.r0 = rm;
                s.r1 = c.r1;
                s.a0 = offset + q * kPi / 2.0;
                s.a1 = offset + (q + 1) * kPi / 2.0;
                out.push_back(s);
            }
            return out;
        }
        Cell lo = c, hi = c;
        if (c.r1 - c.r0 >= c.r1 * (c.a1 - c.a0)) {
            const double rm = c.r0 + frac * (c.r1 - c.r0);
            lo.r1 = rm;
            hi.r0 = rm;
        } else {
            const double am = c.a0 + frac * (c.a1 - c.a0);
            lo.a1 = am;
            hi.a0 = am;
        }
        out.push_back(lo);
        out.push_back(hi);
        return out;
    }

    // Newton (modified by the multiplicity) with a four-point derivative.
    bool newton(cplx start, int multiplicity, DiskZero& out) {
        cplx z = start;
        bool converged = false;
        for (int it = 0; it < 80; ++it) {
            const cplx fz = f_(z);
            if (std::abs(fz) <= 1e-15 * scale_) {
                converged = true;
                break;
            }
            constexpr double h = 1e-4;
            cplx deriv = 0.0;
            cplx rot = 1.0;
            for (int q = 0; q < 4; ++q) {
                deriv += f_(z + h * rot) / rot;
                rot *= kI;
            }
            deriv /= 4.0 * h;
            if (std::abs(deriv) == 0.0) break;
            const cplx step = static_cast<double>(multiplicity) * fz / deriv;
            z -= step;
            if (!std::isfinite(z.real()) || std::abs(z) > 2.0) break;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) {
                converged = true;
                break;
            }
        }
        out.lambda = z;
        out.multiplicity = multiplicity;
        out.residual = std::isfinite(z.real()) && std::abs(z) <= 2.0 ? std::abs(f_(z)) / scale_ : kNaN;
        return converged && out.residual <= 1e-10;
    }

    const std::function<cplx(cplx)>& f_;
    ContourWalker walker_;
    double scale_;
    ZeroFinderOptions options_;
    std::vector<DiskZero> found_;
};

double circle_scale(const std::function<cplx(cplx)>& f, double r) {
    double scale = 0.0;
    for (int k = 0; k < 256; ++k) scale = std::max(scale, std::abs(f(std::polar(r, kTwoPi * k / 256))));
    return scale;
}

}  // namespace

double poisson_kernel(double theta, cplx lambda_tilde) {
    return (1.0 - std::norm(lambda_tilde)) / std::norm(std::polar(1.0, theta) - lambda_tilde);
}

EntropyValue poisson_average(const std::function<double(double)>& g, cplx lambda_tilde, const QuadratureOptions& options) {
    if (std::abs(lambda_tilde) >= 1.0 - kBoundaryBand)
        fail(ErrorCode::InvalidArgument, "lambda_tilde must lie inside the disk");
    return PoissonIntegrator(g, lambda_tilde, options).run();
}

EntropyValue poisson_entropy(const std::function<double(double)>& boundary_log_det, cplx lambda_tilde,
                             const QuadratureOptions& options) {
    EntropyValue v = poisson_average(boundary_log_det, lambda_tilde, options);
    v.value *= -0.5;
    v.error_estimate *= 0.5;
    return v;
}

double log_det_positive(const ComplexMatrix& h) {
    const Eigen::VectorXd ev = linalg::hermitian_eigenvalues(h);
    const double scale = ev.cwiseAbs().maxCoeff();
    if (ev(0) < -1e-6 * scale)
        fail(ErrorCode::NonIntegrable, "boundary density has a negative eigenvalue " + std::to_string(ev(0)));
    if (ev(0) <= 0.0) return -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) sum += std::log(ev(i));
    return sum;
}

ComplexMatrix boundary_omega(const SolutionHandle& handle, double theta, bool star) {
    const cplx e = std::polar(1.0, theta);
    auto omega = [&](cplx l) { return star ? eval_omega_star(handle, l) : eval_omega(handle, l); };
    const ComplexMatrix f1 = omega((1.0 - kRadialStep) * e);
    const ComplexMatrix f2 = omega((1.0 - 2.0 * kRadialStep) * e);
    return 2.0 * f1 - f2;
}

EntropyValue entropy_of_solution(const SolutionHandle& handle, cplx lambda_tilde, bool star,
                                 const QuadratureOptions& options) {
    auto g = [&](double theta) {
        try {
            return log_det_positive(hermitian_part(boundary_omega(handle, theta, star)));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::SolutionPole || e.code() == ErrorCode::ParameterPole) return kNaN;
            throw;
        }
    };
    EntropyValue v = poisson_entropy(g, lambda_tilde, options);
    v.integrand_kind = star ? IntegrandKind::SolutionOmegaStar : IntegrandKind::SolutionOmega;
    return v;
}

EntropyValue entropy_of_parameter(const Parameter& param, cplx lambda_tilde, bool star, const QuadratureOptions& options) {
    if (const auto* c = std::get_if<ContractionSpec>(&param)) {
        const double value = contraction_log_det(c->phi0);
        EntropyValue v = poisson_entropy([value](double) { return value; }, lambda_tilde, options);
        v.integrand_kind = IntegrandKind::ContractionEHat;
        return v;
    }
    const HerglotzSpec& psi = std::get<HerglotzSpec>(param);
    auto g = [&](double theta) {
        try {
            return log_det_positive(imaginary_part(eval_herglotz(psi, boundary_point(theta, star))));
        } catch (const Error& e) {
            // A real pole carries a point mass; the absolutely continuous density there is D.
            if (e.code() == ErrorCode::PoleProximity) return log_det_positive(psi.imag_offset);
            if (e.code() == ErrorCode::BoundaryPole) return kNaN;
            throw;
        }
    };
    EntropyValue v = poisson_entropy(g, lambda_tilde, options);
    v.integrand_kind = IntegrandKind::ParameterPsi;
    return v;
}

cplx q_tilde_at_zero(const SolutionHandle& handle) {
    const int p = handle.p();
    const int n = handle.triple().n();
    const YMatrix y = last_row_frame(handle.triple());
    const ComplexMatrix psi = eval_herglotz(handle.herglotz(), MoebiusMaps::upsilon);
    const cplx det = (kI * y.Y.leftCols(p) + y.Y.rightCols(p) * psi).determinant();
    return (n * p) % 2 == 0 ? det : -det;
}

cplx q_tilde(const SolutionHandle& handle, cplx lambda) {
    if (lambda == 0.0) return q_tilde_at_zero(handle);
    const int p = handle.p();
    const ComplexMatrix v = eval_scaled_frame(handle.triple(), lambda);
    const ComplexMatrix psi = eval_parameter_on_disk(handle.herglotz(), lambda);
    return (v.bottomLeftCorner(p, p) * psi + kI * v.bottomRightCorner(p, p)).determinant();
}

cplx q_hat(const SolutionHandle& handle, cplx lambda) {
    const int p = handle.p();
    const ComplexMatrix v = eval_scaled_frame(handle.triple(), lambda) * rotation_W(p);
    ComplexMatrix phi;
    if (const auto* c = std::get_if<ContractionSpec>(&handle.param())) phi = c->phi0;
    else phi = pair_to_contraction(eval_parameter_on_disk(handle.herglotz(), lambda), kI * identity(p));
    return (v.bottomLeftCorner(p, p) + v.bottomRightCorner(p, p) * phi).determinant();
}

cplx q_function(const SolutionHandle& handle, cplx lambda) {
    const int pn = handle.triple().dim();
    return q_tilde(handle, lambda) / ipow(kI * (lambda + 1.0), pn);
}

int winding_number(const std::function<cplx(cplx)>& f, double r) {
    const double scale = circle_scale(f, r);
    ZeroSearch search(f, scale, {});
    Cell c;
    c.disk = true;
    c.r1 = r;
    return search.count(c);
}

DiskZeros disk_zeros(const std::function<cplx(cplx)>& f, const ZeroFinderOptions& options) {
    DiskZeros out;
    double radius = options.search_radius;
    for (int attempt = 1;; ++attempt) {
        try {
            const double scale = circle_scale(f, radius);
            if (!(scale > 0.0) || !std::isfinite(scale)) fail(ErrorCode::ZeroOnContour, "degenerate function scale");
            ZeroSearch search(f, scale, options);
            Cell outer;
            outer.disk = true;
            outer.r1 = radius;
            const int total = search.count(outer);
            search.search(outer, total, 0);
            out.zeros = search.take();
            out.total_count = total;
            out.attempts = attempt;
            break;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ZeroOnContour || attempt >= options.max_attempts) throw;
            radius *= 1.0 - 1e-5 * attempt;
        }
    }
    out.search_radius = radius;
    std::sort(out.zeros.begin(), out.zeros.end(), [](const DiskZero& a, const DiskZero& b) {
        const double ma = std::abs(a.lambda), mb = std::abs(b.lambda);
        if (ma != mb) return ma < mb;
        return std::arg(a.lambda) < std::arg(b.lambda);
    });
    int located = 0;
    for (const auto& z : out.zeros) located += z.multiplicity;
    if (located != out.total_count)
        fail(ErrorCode::CountMismatch, "located " + std::to_string(located) + " zeros, winding number " +
                                           std::to_string(out.total_count));
    out.distinct_count = static_cast<int>(out.zeros.size());
    try {
        out.boundary_band_count = winding_number(f, 1.0 - 1e-9) - out.total_count;
    } catch (const Error&) {
        out.boundary_band_count = -1;
    }
    return out;
}

cplx blaschke_eval(const DiskZeros& zeros, cplx lambda) {
    cplx b = 1.0;
    for (const auto& z : zeros.zeros)
        b *= ipow((lambda - z.lambda) / (1.0 - std::conj(z.lambda) * lambda), z.multiplicity);
    return b;
}

double blaschke_correction(const DiskZeros& zeros) {
    double c = 1.0;
    for (const auto& z : zeros.zeros) c *= std::pow(std::abs(z.lambda), -2.0 * z.multiplicity);
    return c;
}

DiskZeros q_tilde_zeros(const SolutionHandle& handle, const ZeroFinderOptions& options) {
    return disk_zeros([&handle](cplx l) { return q_tilde(handle, l); }, options);
}

DiskZeros q_hat_zeros(const SolutionHandle& handle, const ZeroFinderOptions& options) {
    return disk_zeros([&handle](cplx l) { return q_hat(handle, l); }, options);
}

EntropyIdentityReport entropy_identity_check(const SolutionHandle& handle, cplx lambda_tilde,
                                             const DiskZeros& zeros_tilde, const DiskZeros& zeros_hat,
                                             const QuadratureOptions& options) {
    const SolutionHandle pair(handle.triple_ptr(), handle.param(), SolutionMode::Pair);
    const SolutionHandle contr(handle.triple_ptr(), handle.param(), SolutionMode::Contractive);
    const int p = handle.p();

    EntropyIdentityReport r;
    r.lambda_tilde = lambda_tilde;
    const EntropyValue lhs_pair = entropy_of_solution(pair, lambda_tilde, true, options);
    const EntropyValue psi_part = entropy_of_parameter(Parameter(pair.herglotz()), lambda_tilde, true, options);
    r.e_star_phi = lhs_pair.value;
    r.e_star_psi = psi_part.value;
    r.ln_q_tilde = log_abs(q_tilde(pair, -lambda_tilde));
    r.ln_b_tilde = log_abs(blaschke_eval(zeros_tilde, -lambda_tilde));
    const double rhs_pair = r.e_star_psi + r.ln_q_tilde - r.ln_b_tilde;
    r.residual_pair = std::abs(r.e_star_phi - rhs_pair);

    const cplx mu = -lambda_tilde;
    const EntropyValue lhs_contr = entropy_of_solution(contr, mu, false, options);
    const EntropyValue e_hat = contraction_entropy(contr, mu, options);
    r.e_phi_hat = lhs_contr.value;
    r.e_hat = e_hat.value;
    r.ln_q_hat = log_abs(q_hat(contr, mu));
    r.ln_b_hat = log_abs(blaschke_eval(zeros_hat, mu));
    const double rhs_contr = r.e_hat + 0.5 * p * std::log(2.0) + r.ln_q_hat - r.ln_b_hat;
    r.residual_contractive = std::abs(r.e_phi_hat - rhs_contr);
    r.agreement = std::abs(rhs_contr - rhs_pair);
    r.quadrature_error = lhs_pair.error_estimate + psi_part.error_estimate + lhs_contr.error_estimate + e_hat.error_estimate;
    return r;
}

OuterCheck outer_poisson_check(const std::function<cplx(cplx)>& q, const DiskZeros& zeros, cplx lambda_tilde,
                               const QuadratureOptions& options) {
    OuterCheck out;
    out.direct = log_abs(q(lambda_tilde)) - log_abs(blaschke_eval(zeros, lambda_tilde));
    auto g = [&](double theta) {
        const cplx e = std::polar(1.0, theta);
        try {
            return log_abs(q(e)) - log_abs(blaschke_eval(zeros, e));
        } catch (const Error& err) {
            if (err.code() == ErrorCode::ParameterPole || err.code() == ErrorCode::BoundaryPole) return kNaN;
            throw;
        }
    };
    out.poisson = poisson_average(g, lambda_tilde, options).value;
    out.residual = std::abs(out.direct - out.poisson);
    return out;
}

}  // namespace indef
