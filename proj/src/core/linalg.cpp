#include "indef/linalg.hpp"

#include <cmath>
#include <string>

namespace indef::linalg {

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) fail(ErrorCode::Internal, "Hermitian eigensolver did not converge");
    return es.eigenvalues();
}

bool is_positive_semidefinite(const ComplexMatrix& h, double eps) {
    if (h.size() == 0) return true;
    const Eigen::VectorXd ev = hermitian_eigenvalues(h);
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    return ev(0) >= -eps * scale;
}

ComplexMatrix refined_inverse(const ComplexMatrix& s) {
    const Eigen::PartialPivLU<ComplexMatrix> lu(s);
    const ComplexMatrix eye = ComplexMatrix::Identity(s.rows(), s.cols());
    ComplexMatrix x = lu.solve(eye);
    const ComplexMatrix residual = eye - s * x;
    x += lu.solve(residual);
    return x;
}

double inverse_condition(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const auto& sv = svd.singularValues();
    if (sv(0) == 0.0) return 0.0;
    return sv(sv.size() - 1) / sv(0);
}

LogDet log_determinant(const ComplexMatrix& m) {
    LogDet out;
    if (m.size() == 0) return out;
    const Eigen::PartialPivLU<ComplexMatrix> lu(m);
    const ComplexMatrix& f = lu.matrixLU();
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
        const double mag = std::abs(f(i, i));
        out.log_abs += std::log(mag);
        if (mag > 0.0) out.phase *= f(i, i) / mag;
    }
    // The permutation contributes its sign.
    out.phase *= static_cast<double>(lu.permutationP().determinant());
    return out;
}

ComplexMatrix solve_or_throw(const ComplexMatrix& m, const ComplexMatrix& rhs, ErrorCode code, const char* what) {
    const Eigen::FullPivLU<ComplexMatrix> lu(m);
    // FullPivLU's rank decision uses a threshold relative to the largest pivot.
    if (!lu.isInvertible()) fail(code, std::string(what) + " is numerically singular");
    return lu.solve(rhs);
}

}  // namespace indef::linalg
