#pragma once

#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "indef/types.hpp"

namespace indef {

inline constexpr double kContractionMargin = 1e-8;
inline constexpr double kPoleProximity = 1e-9;

/// Rational Nevanlinna (Herglotz) matrix function
///
///   psi(z) = B z + C + i D + sum_k M_k / (t_k - z)
///
/// with B, D, M_k positive semidefinite, C Hermitian and real poles t_k.
/// Constant parameters such as psi == i I are the special case B = 0, no poles.
struct HerglotzSpec {
    ComplexMatrix B;
    ComplexMatrix C;
    ComplexMatrix imag_offset;  // D
    std::vector<double> poles;
    std::vector<ComplexMatrix> residues;

    int p() const { return static_cast<int>(C.rows()); }
    bool is_constant() const;

    /// psi == value, split into Hermitian real and imaginary parts.
    static HerglotzSpec constant(const ComplexMatrix& value);

    /// Checks B, D, M_k >= 0, C Hermitian and a six-point Pick kernel test.
    /// Throws NonHermitianInput / InvalidArgument.
    void validate() const;
};

/// Strict constant contraction phi(z) == phi0.
struct ContractionSpec {
    ComplexMatrix phi0;

    int p() const { return static_cast<int>(phi0.rows()); }
    void validate() const;
};

using Parameter = std::variant<HerglotzSpec, ContractionSpec>;

int parameter_order(const Parameter& param);
void validate_parameter(const Parameter& param);

/// Evaluates the rational formula (its analytic continuation off C+).
/// Throws PoleProximity within kPoleProximity of a pole.
ComplexMatrix eval_herglotz(const HerglotzSpec& psi, cplx z);

/// psi on C+ and the reflection psi(z) := psi(conj z)^* on C-.
ComplexMatrix eval_herglotz_reflected(const HerglotzSpec& psi, cplx z);

struct MatrixPair {
    ComplexMatrix P;
    ComplexMatrix Q;
};

ComplexMatrix rotation_W(int p);     // (1/sqrt 2) [[I, -I], [I, I]]
ComplexMatrix signature_J(int p);    // [[0, I], [I, 0]]
ComplexMatrix signature_j(int p);    // diag(I, -I)

/// [P^; Q^] = W^{-1} [P; Q], returns Q^ P^^{-1}. Throws SingularPhat.
ComplexMatrix pair_to_contraction(const ComplexMatrix& P, const ComplexMatrix& Q);

/// W [I; phi].
MatrixPair contraction_to_pair(const ComplexMatrix& phi);

/// The constant Nevanlinna parameter generating the same solution as a
/// constant strict contraction: psi = i (I - phi)(I + phi)^{-1}.
HerglotzSpec herglotz_from_contraction(const ContractionSpec& contraction);

/// Moebius identification of the disk with C+ through upsilon = 2i.
struct MoebiusMaps {
    static constexpr cplx upsilon{0.0, 2.0};
};

/// z(lambda) = 2i (lambda + 1) / (1 - lambda). Throws BoundaryPole at lambda = 1.
cplx cayley(cplx lambda);

/// lambda(z) = (z - 2i) / (z + 2i). Throws BoundaryPole at z = -2i.
cplx cayley_inverse(cplx z);

/// Image of e^{i theta} on the real line. Throws BoundaryPole near theta = 0 mod 2 pi.
double boundary_xi(double theta);

/// Number of eigenvalues below -eps * ||K|| of the Nevanlinna-Pick kernel
/// {(f(z_i) - f(z_k)^*) / (z_i - conj z_k)} on points of C+.
int pick_negative_squares(const std::function<ComplexMatrix(cplx)>& f, std::span<const cplx> points,
                          double eps = 1e-9);

}  // namespace indef
