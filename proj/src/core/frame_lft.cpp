#include "indef/frame_lft.hpp"

#include <cmath>
#include <string>

namespace indef {

namespace {

// X D^{-1}; D is only p x p.
ComplexMatrix right_divide(const ComplexMatrix& x, const Eigen::PartialPivLU<ComplexMatrix>& lu) {
    return x * lu.inverse();
}

bool denominator_singular(cplx det, const ComplexMatrix& num, const ComplexMatrix& den) {
    const double scale = std::max(num.norm(), den.norm());
    return !(std::abs(det) > kDenominatorEps * std::pow(scale, static_cast<double>(den.rows())));
}

}  // namespace

ComplexMatrix eval_parameter_on_disk(const HerglotzSpec& psi, cplx mu) {
    if (std::abs(1.0 - mu) < 1e-14) {
        if (!psi.B.isZero(0.0)) fail(ErrorCode::ParameterPole, "parameter with a linear term is infinite at z = infinity");
        return psi.C + kI * psi.imag_offset;
    }
    try {
        return eval_herglotz(psi, cayley(mu));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::PoleProximity) fail(ErrorCode::ParameterPole, e.what());
        throw;
    }
}

FrameEvaluation eval_frame(const StructuredTriple& triple, cplx z) {
    const int p = triple.p();
    const int dim = triple.dim();
    if (std::abs(z - MoebiusMaps::upsilon) < 1e-10 * std::max(1.0, std::abs(z)))
        fail(ErrorCode::FramePole, "frame evaluated at its pole z = 2i");
    FrameEvaluation out;
    out.z = z;
    out.U = ComplexMatrix::Identity(2 * p, 2 * p);
    if (z != 0.0) {
        const ComplexMatrix lhs = ComplexMatrix::Identity(dim, dim) - z * triple.A().adjoint();
        const ComplexMatrix x = lhs.partialPivLu().solve(triple.SinvPiJ());
        out.U -= kI * z * triple.Pi().adjoint() * x;
    }
    out.U_hat = out.U * rotation_W(p);
    return out;
}

ComplexMatrix eval_scaled_frame(const StructuredTriple& triple, cplx lambda) {
    const int p = triple.p();
    const int n = triple.n();
    const int dim = triple.dim();
    const ComplexMatrix nil = triple.A().adjoint() + 0.5 * kI * ComplexMatrix::Identity(dim, dim);
    const cplx step = -kI * (1.0 + lambda);

    ComplexMatrix acc = ComplexMatrix::Zero(dim, 2 * p);
    ComplexMatrix power = triple.SinvPiJ();
    for (int k = 0; k < n; ++k) {
        if (k > 0) power = nil * power;
        acc += ipow(lambda, n - 1 - k) * ipow(step, k + 1) * power;
    }
    ComplexMatrix v = ipow(lambda, n) * ComplexMatrix::Identity(2 * p, 2 * p);
    v -= kI * triple.Pi().adjoint() * acc;
    return v;
}

double j_unitarity_residual(const StructuredTriple& triple, cplx z) {
    const FrameEvaluation u = eval_frame(triple, z);
    const FrameEvaluation v = eval_frame(triple, std::conj(z));
    const double scale = std::max(1.0, u.U.norm() * v.U.norm());
    return (v.U.adjoint() * triple.J() * u.U - triple.J()).norm() / scale;
}

SolutionHandle::SolutionHandle(std::shared_ptr<const StructuredTriple> triple, Parameter param, SolutionMode mode)
    : triple_(std::move(triple)), param_(std::move(param)), mode_(mode) {
    if (!triple_) fail(ErrorCode::InvalidArgument, "solution handle needs a triple");
    conditions_ = degeneracy_conditions(*triple_, param_);
    if (!conditions_.admissible())
        fail(ErrorCode::DegenerateParameter, "parameter violates the nondegeneracy condition at the node");
    if (const auto* c = std::get_if<ContractionSpec>(&param_)) psi_ = herglotz_from_contraction(*c);
    else psi_ = std::get<HerglotzSpec>(param_);
}

ComplexMatrix SolutionHandle::contraction_at(cplx z) const {
    if (const auto* c = std::get_if<ContractionSpec>(&param_)) return c->phi0;
    return pair_to_contraction(eval_herglotz(psi_, z), kI * identity(p()));
}

ComplexMatrix eval_solution(const SolutionHandle& handle, cplx z) {
    if (z.imag() < 0.0) return eval_solution(handle, std::conj(z)).adjoint();
    // Near the frame pole z = 2i the solution is finite; switch to the scaled frame.
    if (std::abs(cayley_inverse(z)) < 0.5) return kI * eval_omega_star(handle, -cayley_inverse(z));
    const FrameEvaluation f = eval_frame(handle.triple(), z);
    ComplexMatrix num, den;
    if (handle.mode() == SolutionMode::Pair) {
        const ComplexMatrix psi = eval_herglotz(handle.herglotz(), z);
        num = f.a() * psi + kI * f.b();
        den = f.c() * psi + kI * f.d();
    } else {
        const ComplexMatrix phi = handle.contraction_at(z);
        num = f.a_hat() + f.b_hat() * phi;
        den = f.c_hat() + f.d_hat() * phi;
    }
    const Eigen::PartialPivLU<ComplexMatrix> lu(den);
    if (denominator_singular(lu.determinant(), num, den))
        fail(ErrorCode::DenominatorSingular, "linear fractional denominator singular at z");
    return kI * right_divide(num, lu);
}

ComplexMatrix eval_omega_star(const SolutionHandle& handle, cplx lambda) {
    const int p = handle.p();
    const cplx mu = -lambda;
    const ComplexMatrix v = eval_scaled_frame(handle.triple(), mu);
    ComplexMatrix num, den;
    if (handle.mode() == SolutionMode::Pair) {
        const ComplexMatrix psi = eval_parameter_on_disk(handle.herglotz(), mu);
        num = v.topLeftCorner(p, p) * psi + kI * v.topRightCorner(p, p);
        den = v.bottomLeftCorner(p, p) * psi + kI * v.bottomRightCorner(p, p);
    } else {
        ComplexMatrix phi;
        if (const auto* c = std::get_if<ContractionSpec>(&handle.param())) phi = c->phi0;
        else phi = pair_to_contraction(eval_parameter_on_disk(handle.herglotz(), mu), kI * identity(p));
        const ComplexMatrix vh = v * rotation_W(p);
        num = vh.topLeftCorner(p, p) + vh.topRightCorner(p, p) * phi;
        den = vh.bottomLeftCorner(p, p) + vh.bottomRightCorner(p, p) * phi;
    }
    const Eigen::PartialPivLU<ComplexMatrix> lu(den);
    if (denominator_singular(lu.determinant(), num, den))
        fail(ErrorCode::SolutionPole, "omega_star has a pole at lambda");
    // -i phi = -i * i num den^{-1}
    return right_divide(num, lu);
}

ComplexMatrix eval_omega(const SolutionHandle& handle, cplx lambda) { return eval_omega_star(handle, -lambda); }

ComplexMatrix g_function(const StructuredTriple& triple, const HerglotzSpec& psi, cplx z) {
    const int p = triple.p();
    const int dim = triple.dim();
    if (std::abs(z - 0.5 * kI) < 1e-10) fail(ErrorCode::ResolventPole, "z lies in the spectrum of A");
    if (z == 0.0) fail(ErrorCode::InvalidArgument, "g_function needs z != 0");
    const cplx w = 1.0 / std::conj(z);
    const ComplexMatrix psi_w = eval_herglotz(psi, w);

    const ComplexMatrix res =
        (triple.A() - z * ComplexMatrix::Identity(dim, dim)).partialPivLu().solve(triple.Phi2());
    const ComplexMatrix row = kI * triple.Phi1().adjoint() - psi_w.adjoint() * triple.Phi2().adjoint();
    const ComplexMatrix g = identity(p) - row * (triple.S_inv() * res);

    const FrameEvaluation f = eval_frame(triple, w);
    const ComplexMatrix lhs = f.c() * psi_w + kI * f.d();
    const ComplexMatrix rhs = kI * g.adjoint();
    const double residual = (lhs - rhs).norm() / std::max(1.0, lhs.norm());
    if (residual > 1e-9) fail(ErrorCode::Internal, "G-function identity residual " + std::to_string(residual));
    return g;
}

ComplexMatrix a_psi_matrix(const StructuredTriple& triple, const ComplexMatrix& psi_value) {
    const ComplexMatrix row = kI * triple.Phi1().adjoint() - psi_value.adjoint() * triple.Phi2().adjoint();
    const ComplexMatrix a_psi = triple.A() - triple.Phi2() * row * triple.S_inv();
    const ComplexMatrix lhs = a_psi * triple.S() - triple.S() * a_psi.adjoint();
    const ComplexMatrix rhs = triple.Phi2() * (psi_value.adjoint() - psi_value) * triple.Phi2().adjoint();
    const double scale = std::max(1.0, a_psi.norm() * triple.S().norm());
    const double residual = (lhs - rhs).norm() / scale;
    if (residual > 1e-10) fail(ErrorCode::Internal, "A_psi identity residual " + std::to_string(residual));
    return a_psi;
}

}  // namespace indef
