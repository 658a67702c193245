#include "indef/parameter_functions.hpp"

#include <array>
#include <cmath>
#include <string>

#include "indef/linalg.hpp"

namespace indef {

namespace {

void require_square(const ComplexMatrix& m, int p, const char* name) {
    if (m.rows() != p || m.cols() != p)
        fail(ErrorCode::InvalidArgument, std::string(name) + " must be " + std::to_string(p) + "x" + std::to_string(p));
}

void require_hermitian(const ComplexMatrix& m, const char* name) {
    if (hermitian_defect(m) > 1e-12) fail(ErrorCode::NonHermitianInput, std::string(name) + " is not Hermitian");
}

void require_psd(const ComplexMatrix& m, const char* name) {
    require_hermitian(m, name);
    if (!linalg::is_positive_semidefinite(m, 1e-10))
        fail(ErrorCode::InvalidArgument, std::string(name) + " is not positive semidefinite");
}

// Fixed probe points in C+ for the Pick kernel test.
constexpr std::array<cplx, 6> kPickProbe = {cplx{0.3, 0.7}, cplx{-1.1, 0.4}, cplx{2.2, 1.9},
                                             cplx{-0.4, 3.1}, cplx{0.05, 0.15}, cplx{1.4, 0.55}};

}  // namespace

bool HerglotzSpec::is_constant() const { return poles.empty() && B.isZero(0.0); }

HerglotzSpec HerglotzSpec::constant(const ComplexMatrix& value) {
    const auto p = value.rows();
    HerglotzSpec psi;
    psi.B = ComplexMatrix::Zero(p, p);
    psi.C = hermitian_part(value);
    psi.imag_offset = imaginary_part(value);
    return psi;
}

void HerglotzSpec::validate() const {
    const int order = p();
    if (order <= 0) fail(ErrorCode::InvalidArgument, "Herglotz parameter has empty C");
    require_square(B, order, "B");
    require_square(C, order, "C");
    require_square(imag_offset, order, "imag_offset");
    require_psd(B, "B");
    require_hermitian(C, "C");
    require_psd(imag_offset, "imag_offset");
    if (poles.size() != residues.size()) fail(ErrorCode::InvalidArgument, "poles and residues differ in length");
    for (std::size_t k = 0; k < poles.size(); ++k) {
        if (!std::isfinite(poles[k])) fail(ErrorCode::InvalidArgument, "non-finite pole");
        for (std::size_t j = 0; j < k; ++j)
            if (poles[j] == poles[k]) fail(ErrorCode::InvalidArgument, "poles must be distinct");
        require_square(residues[k], order, "residue");
        require_psd(residues[k], "residue");
    }
    const auto f = [this](cplx z) { return eval_herglotz(*this, z); };
    if (pick_negative_squares(f, kPickProbe) != 0)
        fail(ErrorCode::InvalidArgument, "Pick kernel of the parameter has negative squares");
}

void ContractionSpec::validate() const {
    if (phi0.rows() == 0 || phi0.rows() != phi0.cols())
        fail(ErrorCode::InvalidArgument, "phi0 must be a nonempty square matrix");
    if (spectral_norm(phi0) > 1.0 - kContractionMargin)
        fail(ErrorCode::InvalidArgument, "phi0 is not a strict contraction");
}

int parameter_order(const Parameter& param) {
    return std::visit([](const auto& spec) { return spec.p(); }, param);
}

void validate_parameter(const Parameter& param) {
    std::visit([](const auto& spec) { spec.validate(); }, param);
}

ComplexMatrix eval_herglotz(const HerglotzSpec& psi, cplx z) {
    ComplexMatrix value = z * psi.B + psi.C + kI * psi.imag_offset;
    for (std::size_t k = 0; k < psi.poles.size(); ++k) {
        const cplx gap = psi.poles[k] - z;
        if (std::abs(gap) < kPoleProximity)
            fail(ErrorCode::PoleProximity, "evaluation point within pole tolerance of t=" + std::to_string(psi.poles[k]));
        value += psi.residues[k] / gap;
    }
    return value;
}

ComplexMatrix eval_herglotz_reflected(const HerglotzSpec& psi, cplx z) {
    if (z.imag() < 0.0) return eval_herglotz(psi, std::conj(z)).adjoint();
    return eval_herglotz(psi, z);
}

ComplexMatrix rotation_W(int p) {
    const double r = 1.0 / std::sqrt(2.0);
    ComplexMatrix w(2 * p, 2 * p);
    w << r * identity(p), -r * identity(p), r * identity(p), r * identity(p);
    return w;
}

ComplexMatrix signature_J(int p) {
    ComplexMatrix j = ComplexMatrix::Zero(2 * p, 2 * p);
    j.topRightCorner(p, p) = identity(p);
    j.bottomLeftCorner(p, p) = identity(p);
    return j;
}

ComplexMatrix signature_j(int p) {
    ComplexMatrix j = ComplexMatrix::Identity(2 * p, 2 * p);
    j.bottomRightCorner(p, p) *= -1.0;
    return j;
}

ComplexMatrix pair_to_contraction(const ComplexMatrix& P, const ComplexMatrix& Q) {
    const auto p = P.rows();
    if (P.cols() != p || Q.rows() != p || Q.cols() != p) fail(ErrorCode::InvalidArgument, "pair blocks must be p x p");
    // W^{-1} = W^* = (1/sqrt 2) [[I, I], [-I, I]]
    const double r = 1.0 / std::sqrt(2.0);
    const ComplexMatrix p_hat = r * (P + Q);
    const ComplexMatrix q_hat = r * (Q - P);
    const double scale = std::max(P.norm() + Q.norm(), 1e-300);
    const Eigen::PartialPivLU<ComplexMatrix> lu(p_hat);
    if (std::abs(lu.determinant()) <= 1e-12 * std::pow(scale, static_cast<double>(p)))
        fail(ErrorCode::SingularPhat, "P^ is singular; the pair is degenerate at this point");
    // phi = Q^ P^^{-1}  <=>  P^^T phi^T = Q^^T
    return p_hat.transpose().partialPivLu().solve(q_hat.transpose()).transpose();
}

MatrixPair contraction_to_pair(const ComplexMatrix& phi) {
    const auto p = static_cast<int>(phi.rows());
    ComplexMatrix stacked(2 * p, p);
    stacked << identity(p), phi;
    const ComplexMatrix pq = rotation_W(p) * stacked;
    return {pq.topRows(p), pq.bottomRows(p)};
}

HerglotzSpec herglotz_from_contraction(const ContractionSpec& contraction) {
    const int p = contraction.p();
    const ComplexMatrix& phi = contraction.phi0;
    const ComplexMatrix lhs = identity(p) + phi;
    // psi = i (I - phi)(I + phi)^{-1}; (I + phi) is invertible for a strict contraction.
    const ComplexMatrix value =
        kI * lhs.transpose().partialPivLu().solve((identity(p) - phi).transpose()).transpose();
    return HerglotzSpec::constant(value);
}

cplx cayley(cplx lambda) {
    const cplx denom = 1.0 - lambda;
    if (std::abs(denom) < 1e-14) fail(ErrorCode::BoundaryPole, "cayley map evaluated at lambda = 1");
    return MoebiusMaps::upsilon * (lambda + 1.0) / denom;
}

cplx cayley_inverse(cplx z) {
    const cplx upsilon = MoebiusMaps::upsilon;
    const cplx denom = z - std::conj(upsilon);
    if (std::abs(denom) < 1e-14) fail(ErrorCode::BoundaryPole, "inverse cayley map evaluated at z = -2i");
    return (z - upsilon) / denom;
}

double boundary_xi(double theta) {
    const cplx e = std::polar(1.0, theta);
    const cplx denom = e - 1.0;
    if (std::abs(denom) < 1e-12) fail(ErrorCode::BoundaryPole, "boundary map evaluated at theta = 0 mod 2pi");
    const cplx upsilon = MoebiusMaps::upsilon;
    const cplx xi = (std::conj(upsilon) * e - upsilon) / denom;
    if (std::abs(xi.imag()) > 1e-12 * std::max(1.0, std::abs(xi)))
        fail(ErrorCode::Internal, "boundary image is not real");
    return xi.real();
}

int pick_negative_squares(const std::function<ComplexMatrix(cplx)>& f, std::span<const cplx> points, double eps) {
    if (points.empty()) return 0;
    std::vector<ComplexMatrix> values;
    values.reserve(points.size());
    for (const cplx z : points) {
        if (z.imag() <= 0.0) fail(ErrorCode::InvalidArgument, "Pick kernel points must lie in C+");
        values.push_back(f(z));
    }
    const auto p = values.front().rows();
    const auto m = static_cast<Eigen::Index>(points.size());
    ComplexMatrix kernel(m * p, m * p);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index k = 0; k < m; ++k)
            kernel.block(i * p, k * p, p, p) =
                (values[i] - values[k].adjoint()) / (points[i] - std::conj(points[k]));
    const Eigen::VectorXd ev = linalg::hermitian_eigenvalues(kernel);
    const double scale = ev.cwiseAbs().maxCoeff();
    int negative = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) < -eps * scale) ++negative;
    return negative;
}

}  // namespace indef
