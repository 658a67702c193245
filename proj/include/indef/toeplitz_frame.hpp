#pragma once

#include <optional>
#include <vector>

#include "indef/parameter_functions.hpp"
#include "indef/types.hpp"

namespace indef {

inline constexpr double kInertiaEps = 1e-10;
inline constexpr double kDetEps = 1e-8;
inline constexpr double kRankEps = 1e-12;

/// Block Toeplitz data S(n) = {s_{j-i}}_{i,j=1}^n with s_{-k} = s_k^*, and the
/// Hermitian shift nu entering the first Taylor coefficient.
struct ToeplitzSpec {
    int p = 0;
    int n = 0;
    std::vector<ComplexMatrix> blocks;  // s_0, ..., s_{n-1}
    ComplexMatrix nu;

    /// s_k for |k| < n.
    ComplexMatrix block(int k) const;

    /// Throws InvalidArgument on shape errors, NonHermitianInput if s_0 or nu
    /// is not Hermitian.
    void validate() const;
};

ComplexMatrix assemble_toeplitz(const ToeplitzSpec& spec);

/// Count of eigenvalues below -eps ||H||. Throws AmbiguousInertia when an
/// eigenvalue lies inside [-eps ||H||, eps ||H||].
int negative_index(const ComplexMatrix& h, double eps = kInertiaEps);

struct InertiaSummary {
    int negative = 0;
    int positive = 0;
    double min_abs = 0.0;   // smallest |eigenvalue|
    double norm = 0.0;      // largest |eigenvalue|
    bool ambiguous = false;
};

/// Non-throwing inertia with the same tolerance convention as negative_index.
InertiaSummary inertia(const ComplexMatrix& h, double eps = kInertiaEps);

/// The operators A, Phi1, Phi2 solving A S - S A^* = i Pi J Pi^* for a block
/// Toeplitz S, together with S^{-1} and its negative index. Immutable.
class StructuredTriple {
public:
    explicit StructuredTriple(ToeplitzSpec spec);

    const ToeplitzSpec& spec() const { return spec_; }
    int p() const { return spec_.p; }
    int n() const { return spec_.n; }
    int dim() const { return spec_.p * spec_.n; }

    const ComplexMatrix& A() const { return a_; }
    const ComplexMatrix& Phi1() const { return phi1_; }
    const ComplexMatrix& Phi2() const { return phi2_; }
    const ComplexMatrix& Pi() const { return pi_; }
    const ComplexMatrix& J() const { return j_; }
    const ComplexMatrix& S() const { return s_; }
    const ComplexMatrix& S_inv() const { return s_inv_; }
    /// S^{-1} Pi J, shared by every frame evaluation.
    const ComplexMatrix& SinvPiJ() const { return sinv_pi_j_; }
    int kappa() const { return kappa_; }
    /// Distinct eigenvalues of A in C+; sigma(A) = {i/2}.
    int theta_count() const { return 1; }

    /// ||A S - S A^* - i(Phi1 Phi2^* + Phi2 Phi1^*)|| / ||S||.
    double displacement_residual() const;

private:
    ToeplitzSpec spec_;
    ComplexMatrix a_, phi1_, phi2_, pi_, j_, s_, s_inv_, sinv_pi_j_;
    int kappa_ = 0;
};

/// Validates the Toeplitz data and builds the triple. Throws SingularS,
/// NonHermitianInput, AmbiguousInertia.
StructuredTriple build_structured_triple(const ToeplitzSpec& spec);

/// Last block row of S^{-1} Pi and the blocks t_{n,k}, q_{n,k}.
struct YMatrix {
    ComplexMatrix Y;                   // p x 2p
    std::vector<ComplexMatrix> t;      // t_{n,1..n}: last block row of S^{-1}
    std::vector<ComplexMatrix> q;      // q_{n,1..n}: blocks of Y J Pi^* S^{-1}
    double rank_ratio = 0.0;           // sigma_p / sigma_1 of Y
    double recursion_residual = 0.0;   // max_k ||t_k - (q_k - q_{k+1})|| / ||S^{-1}||
};

/// Throws RankDeficientY, Internal if t_{n,k} = q_{n,k} - q_{n,k+1} fails.
YMatrix last_row_frame(const StructuredTriple& triple);

struct DegeneracyReport {
    bool row_condition = false;    // det(i Y1 + Y2 psi(2i)) != 0
    bool frame_condition = false;  // det(C psi(2i)^* + i D) != 0, [C D] the frame's bottom row at -2i
    std::optional<bool> contraction_condition;  // det(Y J W [I; phi0]) != 0, contraction parameters only
    cplx det_row_condition{};
    cplx det_frame_condition{};
    std::optional<cplx> det_contraction_condition;
    double scale_row_condition = 0.0;
    double scale_frame_condition = 0.0;

    bool admissible() const { return row_condition && frame_condition && contraction_condition.value_or(true); }
};

/// Evaluates the nondegeneracy determinants at the interpolation node. A
/// contraction parameter is also checked through its equivalent Nevanlinna
/// pair. Throws InconsistentConditions when the row and frame conditions disagree.
DegeneracyReport degeneracy_conditions(const StructuredTriple& triple, const Parameter& param);

/// (A - z^{-1} I)^{-1} Phi2 by a dense solve, checked against the closed form.
/// Throws PoleHit at z = -2i, InvalidArgument at z = 0.
ComplexMatrix resolvent_column(const StructuredTriple& triple, cplx z);

/// -z / (1 - iz/2) [I; r I; ...; r^{n-1} I] with r = (1 + iz/2) / (1 - iz/2).
ComplexMatrix resolvent_closed_form(int p, int n, cplx z);

/// det(A^* - z(lambda)^{-1} I), evaluated densely.
cplx shifted_adjoint_det(const StructuredTriple& triple, cplx lambda);

/// (lambda / (i (lambda + 1)))^{pn}.
cplx shifted_adjoint_det_closed_form(int p, int n, cplx lambda);

}  // namespace indef
