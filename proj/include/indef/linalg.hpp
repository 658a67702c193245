#pragma once

#include "indef/types.hpp"

namespace indef::linalg {

/// Ascending eigenvalues of the Hermitian part of h.
Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& h);

/// All eigenvalues >= -eps * max(1, ||h||).
bool is_positive_semidefinite(const ComplexMatrix& h, double eps = 1e-10);

/// Dense inverse from a partial-pivot LU, followed by one step of iterative
/// refinement X <- X + S^{-1}(I - S X).
ComplexMatrix refined_inverse(const ComplexMatrix& s);

/// Smallest / largest singular value ratio; 0 for a zero matrix.
double inverse_condition(const ComplexMatrix& m);

/// det(m) = phase * exp(log_abs) from a partial-pivot LU; log_abs = -inf for an
/// exactly singular factor.
struct LogDet {
    double log_abs = 0.0;
    cplx phase{1.0, 0.0};

    cplx value() const { return phase * std::exp(log_abs); }
};

LogDet log_determinant(const ComplexMatrix& m);

/// Solves m x = rhs, throwing `code` if m is numerically singular.
ComplexMatrix solve_or_throw(const ComplexMatrix& m, const ComplexMatrix& rhs, ErrorCode code,
                             const char* what);

}  // namespace indef::linalg
