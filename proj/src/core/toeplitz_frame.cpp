#include "indef/toeplitz_frame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "indef/linalg.hpp"

namespace indef {

ComplexMatrix ToeplitzSpec::block(int k) const {
    if (k >= 0) return blocks.at(static_cast<std::size_t>(k));
    return blocks.at(static_cast<std::size_t>(-k)).adjoint();
}

void ToeplitzSpec::validate() const {
    if (p <= 0 || n <= 0) fail(ErrorCode::InvalidArgument, "p and n must be positive");
    if (static_cast<int>(blocks.size()) != n)
        fail(ErrorCode::InvalidArgument, "expected " + std::to_string(n) + " blocks, got " + std::to_string(blocks.size()));
    for (const auto& s : blocks)
        if (s.rows() != p || s.cols() != p) fail(ErrorCode::InvalidArgument, "every block must be p x p");
    if (nu.rows() != p || nu.cols() != p) fail(ErrorCode::InvalidArgument, "nu must be p x p");
    const double scale = std::max(1.0, blocks.front().norm());
    if (hermitian_defect(blocks.front()) > 1e-12 * scale) fail(ErrorCode::NonHermitianInput, "s_0 is not Hermitian");
    if (hermitian_defect(nu) > 1e-12 * std::max(1.0, nu.norm())) fail(ErrorCode::NonHermitianInput, "nu is not Hermitian");
    for (const auto& s : blocks)
        if (!s.allFinite()) fail(ErrorCode::InvalidArgument, "non-finite block entry");
}

ComplexMatrix assemble_toeplitz(const ToeplitzSpec& spec) {
    const int p = spec.p;
    const int n = spec.n;
    ComplexMatrix s(p * n, p * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s.block(i * p, j * p, p, p) = spec.block(j - i);
    // Enforce exact Hermitian symmetry on the diagonal blocks.
    return hermitian_part(s);
}

InertiaSummary inertia(const ComplexMatrix& h, double eps) {
    InertiaSummary out;
    if (h.size() == 0) return out;
    const Eigen::VectorXd ev = linalg::hermitian_eigenvalues(h);
    out.norm = ev.cwiseAbs().maxCoeff();
    out.min_abs = ev.cwiseAbs().minCoeff();
    const double cut = eps * out.norm;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -cut) ++out.negative;
        else if (ev(i) > cut) ++out.positive;
        else out.ambiguous = true;
    }
    if (out.norm == 0.0) out.ambiguous = true;
    return out;
}

int negative_index(const ComplexMatrix& h, double eps) {
    if (hermitian_defect(h) > 1e-10 * std::max(1.0, h.norm()))
        fail(ErrorCode::NonHermitianInput, "negative_index needs a Hermitian matrix");
    const InertiaSummary in = inertia(h, eps);
    if (in.ambiguous)
        fail(ErrorCode::AmbiguousInertia, "eigenvalue of modulus " + std::to_string(in.min_abs) +
                                              " within tolerance of zero (norm " + std::to_string(in.norm) + ")");
    return in.negative;
}

StructuredTriple::StructuredTriple(ToeplitzSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    const int p = spec_.p;
    const int n = spec_.n;
    const int dim = p * n;

    a_ = ComplexMatrix::Zero(dim, dim);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
            a_.block(i * p, j * p, p, p) = (i == j ? 0.5 * kI : kI) * identity(p);

    phi2_.resize(dim, p);
    phi1_.resize(dim, p);
    ComplexMatrix acc = 0.5 * spec_.block(0);
    for (int k = 0; k < n; ++k) {
        if (k > 0) acc += spec_.block(-k);
        phi2_.block(k * p, 0, p, p) = identity(p);
        phi1_.block(k * p, 0, p, p) = acc + kI * spec_.nu;
    }
    pi_.resize(dim, 2 * p);
    pi_ << phi1_, phi2_;
    j_ = signature_J(p);

    s_ = assemble_toeplitz(spec_);
    if (linalg::inverse_condition(s_) <= kRankEps) fail(ErrorCode::SingularS, "S(n) is numerically singular");
    s_inv_ = linalg::refined_inverse(s_);
    sinv_pi_j_ = s_inv_ * pi_ * j_;

    const InertiaSummary in = inertia(s_);
    if (in.ambiguous)
        fail(ErrorCode::AmbiguousInertia, "S(n) has an eigenvalue within tolerance of zero");
    kappa_ = in.negative;
}

double StructuredTriple::displacement_residual() const {
    const ComplexMatrix lhs = a_ * s_ - s_ * a_.adjoint();
    const ComplexMatrix rhs = kI * (phi1_ * phi2_.adjoint() + phi2_ * phi1_.adjoint());
    return (lhs - rhs).norm() / s_.norm();
}

StructuredTriple build_structured_triple(const ToeplitzSpec& spec) { return StructuredTriple(spec); }

YMatrix last_row_frame(const StructuredTriple& triple) {
    const int p = triple.p();
    const int n = triple.n();
    const ComplexMatrix last_row = triple.S_inv().bottomRows(p);

    YMatrix out;
    out.Y = last_row * triple.Pi();
    Eigen::JacobiSVD<ComplexMatrix> svd(out.Y);
    const auto& sv = svd.singularValues();
    out.rank_ratio = sv(0) > 0.0 ? sv(p - 1) / sv(0) : 0.0;
    if (out.rank_ratio <= kRankEps) fail(ErrorCode::RankDeficientY, "Y has rank below p");

    const ComplexMatrix q_row = out.Y * triple.J() * triple.Pi().adjoint() * triple.S_inv();
    out.t.reserve(n);
    out.q.reserve(n);
    for (int k = 0; k < n; ++k) {
        out.t.push_back(last_row.middleCols(k * p, p));
        out.q.push_back(q_row.middleCols(k * p, p));
    }
    const double scale = triple.S_inv().norm();
    for (int k = 0; k < n; ++k) {
        ComplexMatrix diff = out.t[k] - out.q[k];
        if (k + 1 < n) diff += out.q[k + 1];
        out.recursion_residual = std::max(out.recursion_residual, diff.norm() / scale);
    }
    // Roundoff in S^{-1} grows with its condition number.
    const double bound = std::max(1e-10, 1e2 * std::numeric_limits<double>::epsilon() * triple.S().norm() * scale);
    if (out.recursion_residual > bound) {
        std::ostringstream msg;
        msg << "last-row recursion residual " << out.recursion_residual << " exceeds " << bound;
        fail(ErrorCode::Internal, msg.str());
    }
    return out;
}

namespace {

// U(-2i) blocks c and d, evaluated directly from the resolvent; z = -2i is
// never a frame pole since sigma(A^*) = {-i/2}.
ComplexMatrix frame_bottom_row(const StructuredTriple& triple, cplx z) {
    const int dim = triple.dim();
    const int p = triple.p();
    const ComplexMatrix lhs = ComplexMatrix::Identity(dim, dim) - z * triple.A().adjoint();
    const ComplexMatrix x = lhs.partialPivLu().solve(triple.SinvPiJ());
    ComplexMatrix u = ComplexMatrix::Identity(2 * p, 2 * p) - kI * z * triple.Pi().adjoint() * x;
    return u.bottomRows(p);
}

bool det_nonzero(cplx det, double factor_scale, int p) {
    return std::abs(det) > kDetEps * std::pow(factor_scale, static_cast<double>(p));
}

}  // namespace

DegeneracyReport degeneracy_conditions(const StructuredTriple& triple, const Parameter& param) {
    const int p = triple.p();
    if (parameter_order(param) != p) fail(ErrorCode::InvalidArgument, "parameter order differs from block order");
    validate_parameter(param);

    HerglotzSpec psi;
    const ContractionSpec* contraction = std::get_if<ContractionSpec>(&param);
    if (contraction) psi = herglotz_from_contraction(*contraction);
    else psi = std::get<HerglotzSpec>(param);

    ComplexMatrix psi_node;
    try {
        psi_node = eval_herglotz(psi, MoebiusMaps::upsilon);
    } catch (const Error& e) {
        fail(ErrorCode::EvaluationFailure, std::string("parameter not evaluable at 2i: ") + e.what());
    }

    const YMatrix y = last_row_frame(triple);
    const ComplexMatrix y1 = y.Y.leftCols(p);
    const ComplexMatrix y2 = y.Y.rightCols(p);

    DegeneracyReport out;
    // Y J [psi; iI] = i Y1 + Y2 psi.
    out.det_row_condition = (kI * y1 + y2 * psi_node).determinant();
    ComplexMatrix stacked(2 * p, p);
    stacked << psi_node, kI * identity(p);
    out.scale_row_condition = spectral_norm(y.Y) * spectral_norm(stacked);
    out.row_condition = det_nonzero(out.det_row_condition, out.scale_row_condition, p);

    const ComplexMatrix cd = frame_bottom_row(triple, -MoebiusMaps::upsilon);
    const ComplexMatrix c = cd.leftCols(p);
    const ComplexMatrix d = cd.rightCols(p);
    out.det_frame_condition = (c * psi_node.adjoint() + kI * d).determinant();
    stacked << psi_node.adjoint(), kI * identity(p);
    out.scale_frame_condition = spectral_norm(cd) * spectral_norm(stacked);
    out.frame_condition = det_nonzero(out.det_frame_condition, out.scale_frame_condition, p);

    if (out.row_condition != out.frame_condition)
        fail(ErrorCode::InconsistentConditions,
             "the row and frame conditions disagree: |det| " + std::to_string(std::abs(out.det_row_condition)) + " vs " +
                 std::to_string(std::abs(out.det_frame_condition)));

    if (contraction) {
        ComplexMatrix ip(2 * p, p);
        ip << identity(p), contraction->phi0;
        const ComplexMatrix w_col = rotation_W(p) * ip;
        const cplx det = (y.Y * triple.J() * w_col).determinant();
        out.det_contraction_condition = det;
        out.contraction_condition = det_nonzero(det, spectral_norm(y.Y) * spectral_norm(w_col), p);
    }
    return out;
}

ComplexMatrix resolvent_closed_form(int p, int n, cplx z) {
    const cplx half = 0.5 * kI * z;
    if (std::abs(1.0 - half) < 1e-14) fail(ErrorCode::PoleHit, "closed-form resolvent at z = -2i");
    const cplx factor = -z / (1.0 - half);
    const cplx ratio = (1.0 + half) / (1.0 - half);
    ComplexMatrix out(p * n, p);
    cplx power = factor;
    for (int k = 0; k < n; ++k) {
        out.block(k * p, 0, p, p) = power * identity(p);
        power *= ratio;
    }
    return out;
}

ComplexMatrix resolvent_column(const StructuredTriple& triple, cplx z) {
    if (z == 0.0) fail(ErrorCode::InvalidArgument, "resolvent_column needs z != 0");
    if (std::abs(z + 2.0 * kI) < 1e-10 * std::max(1.0, std::abs(z)))
        fail(ErrorCode::PoleHit, "1/z coincides with the eigenvalue i/2 of A");
    const int dim = triple.dim();
    const ComplexMatrix shifted = triple.A() - ComplexMatrix::Identity(dim, dim) / z;
    const ComplexMatrix dense = shifted.partialPivLu().solve(triple.Phi2());
    const ComplexMatrix closed = resolvent_closed_form(triple.p(), triple.n(), z);
    const double residual = (dense - closed).norm() / std::max(1.0, closed.norm());
    if (residual > 1e-9)
        fail(ErrorCode::Internal, "resolvent closed form mismatch " + std::to_string(residual));
    return dense;
}

cplx shifted_adjoint_det(const StructuredTriple& triple, cplx lambda) {
    const cplx z = cayley(lambda);
    if (z == 0.0) fail(ErrorCode::InvalidArgument, "z(lambda) = 0 at lambda = -1");
    const int dim = triple.dim();
    return (triple.A().adjoint() - ComplexMatrix::Identity(dim, dim) / z).determinant();
}

cplx shifted_adjoint_det_closed_form(int p, int n, cplx lambda) {
    return ipow(lambda / (kI * (lambda + 1.0)), p * n);
}

}  // namespace indef
