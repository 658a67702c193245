#pragma once

#include <memory>

#include "indef/parameter_functions.hpp"
#include "indef/toeplitz_frame.hpp"
#include "indef/types.hpp"

namespace indef {

inline constexpr double kDenominatorEps = 1e-12;

/// U(z) = I - i z Pi^* (I - z A^*)^{-1} S^{-1} Pi J split into p x p blocks,
/// together with the rotated frame U(z) W.
struct FrameEvaluation {
    cplx z{};
    ComplexMatrix U;
    ComplexMatrix U_hat;

    int p() const { return static_cast<int>(U.rows() / 2); }
    ComplexMatrix a() const { return U.topLeftCorner(p(), p()); }
    ComplexMatrix b() const { return U.topRightCorner(p(), p()); }
    ComplexMatrix c() const { return U.bottomLeftCorner(p(), p()); }
    ComplexMatrix d() const { return U.bottomRightCorner(p(), p()); }
    ComplexMatrix a_hat() const { return U_hat.topLeftCorner(p(), p()); }
    ComplexMatrix b_hat() const { return U_hat.topRightCorner(p(), p()); }
    ComplexMatrix c_hat() const { return U_hat.bottomLeftCorner(p(), p()); }
    ComplexMatrix d_hat() const { return U_hat.bottomRightCorner(p(), p()); }
};

/// Throws FramePole at z = 2i.
FrameEvaluation eval_frame(const StructuredTriple& triple, cplx z);

/// V(lambda) = lambda^n U(z(lambda)), a matrix polynomial of degree n in lambda:
///
///   V(lambda) = lambda^n I - i Pi^* sum_{k<n} lambda^{n-1-k} (-i(1+lambda))^{k+1} N^k S^{-1} Pi J
///
/// with N = A^* + (i/2) I nilpotent. Defined on the whole plane, including the
/// points lambda = 0 and lambda = 1 where the Cayley map degenerates.
ComplexMatrix eval_scaled_frame(const StructuredTriple& triple, cplx lambda);

/// psi(z(mu)), including mu = 1 (z = infinity) for parameters without a
/// linear term. Throws ParameterPole.
ComplexMatrix eval_parameter_on_disk(const HerglotzSpec& psi, cplx mu);

/// ||U(conj z)^* J U(z) - J|| / max(1, ||U(conj z)|| ||U(z)||).
double j_unitarity_residual(const StructuredTriple& triple, cplx z);

enum class SolutionMode { Pair, Contractive };

/// A member of the solution family: a structured triple, a parameter and the
/// form of the linear fractional transformation used to evaluate it.
class SolutionHandle {
public:
    /// Checks the nondegeneracy conditions; throws DegenerateParameter if they fail.
    SolutionHandle(std::shared_ptr<const StructuredTriple> triple, Parameter param, SolutionMode mode);

    const StructuredTriple& triple() const { return *triple_; }
    std::shared_ptr<const StructuredTriple> triple_ptr() const { return triple_; }
    const Parameter& param() const { return param_; }
    SolutionMode mode() const { return mode_; }
    const DegeneracyReport& conditions() const { return conditions_; }
    int p() const { return triple_->p(); }

    /// The Nevanlinna parameter generating the same solution family member.
    const HerglotzSpec& herglotz() const { return psi_; }

    /// The contraction phi(z) entering the contractive form.
    ComplexMatrix contraction_at(cplx z) const;

private:
    std::shared_ptr<const StructuredTriple> triple_;
    Parameter param_;
    SolutionMode mode_;
    DegeneracyReport conditions_;
    HerglotzSpec psi_;
};

/// phi(z) by the selected linear fractional form; phi(z) := phi(conj z)^* for
/// Im z < 0. Throws DenominatorSingular, FramePole.
ComplexMatrix eval_solution(const SolutionHandle& handle, cplx z);

/// omega_star(lambda) = -i phi(2i (1 - lambda) / (1 + lambda)), evaluated
/// through the scaled frame at -lambda. Throws SolutionPole.
ComplexMatrix eval_omega_star(const SolutionHandle& handle, cplx lambda);

/// omega(lambda) = omega_star(-lambda).
ComplexMatrix eval_omega(const SolutionHandle& handle, cplx lambda);

/// G(z) = I - (i Phi1^* - psi(1/conj z)^* Phi2^*) S^{-1} (A - z I)^{-1} Phi2.
/// Asserts c(w) psi(w) + i d(w) = i G(1/conj w)^* at w = 1/conj z.
/// Throws ResolventPole at z = i/2.
ComplexMatrix g_function(const StructuredTriple& triple, const HerglotzSpec& psi, cplx z);

/// A_psi = A - Phi2 (i Phi1^* - psi_value^* Phi2^*) S^{-1}, psi_value = psi(1/conj z).
/// Asserts A_psi S - S A_psi^* = Phi2 (psi_value^* - psi_value) Phi2^*.
ComplexMatrix a_psi_matrix(const StructuredTriple& triple, const ComplexMatrix& psi_value);

}  // namespace indef
