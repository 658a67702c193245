#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace indef {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

// Every failure mode named by the library contracts. The numeric values are
// part of the C ABI (see indef_entropy.h) and must not be reordered.
enum class ErrorCode : int {
    Ok = 0,
    InvalidArgument = 1,
    NonHermitianInput = 2,
    SingularS = 3,
    AmbiguousInertia = 4,
    RankDeficientY = 5,
    EvaluationFailure = 6,
    InconsistentConditions = 7,
    PoleHit = 8,
    PoleProximity = 9,
    SingularPhat = 10,
    BoundaryPole = 11,
    FramePole = 12,
    DenominatorSingular = 13,
    SolutionPole = 14,
    ResolventPole = 15,
    PoleInsideRadius = 16,
    NonConvergent = 17,
    CoefficientMismatch = 18,
    NonIntegrable = 19,
    NoConvergence = 20,
    ParameterPole = 21,
    ZeroOnContour = 22,
    CountMismatch = 23,
    ConditioningBreakdown = 24,
    GenerationExhausted = 25,
    DegenerateParameter = 26,
    Io = 27,
    Internal = 28,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

// Integer power by repeated squaring; exact at x = 0 (0^0 = 1), unlike the
// complex std::pow overload.
inline cplx ipow(cplx x, int k) {
    if (k < 0) return 1.0 / ipow(x, -k);
    cplx result{1.0, 0.0};
    while (k > 0) {
        if (k & 1) result *= x;
        x *= x;
        k >>= 1;
    }
    return result;
}

inline ComplexMatrix identity(int p) { return ComplexMatrix::Identity(p, p); }

inline ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

// (m - m^*) / 2i, the Hermitian "imaginary part" of a square matrix.
inline ComplexMatrix imaginary_part(const ComplexMatrix& m) { return (m - m.adjoint()) / (2.0 * kI); }

inline double spectral_norm(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues()(0);
}

inline double hermitian_defect(const ComplexMatrix& m) {
    const double scale = std::max(1.0, m.norm());
    return (m - m.adjoint()).norm() / scale;
}

}  // namespace indef
