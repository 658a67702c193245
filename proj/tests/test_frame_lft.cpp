#include "doctest.h"

#include <array>

#include "indef/frame_lft.hpp"
#include "test_support.hpp"

using namespace indef;

namespace {

std::shared_ptr<const StructuredTriple> make_triple(std::mt19937_64& rng, int p, int n, double shift, bool nu = false) {
    return std::make_shared<const StructuredTriple>(build_structured_triple(testsupport::random_spec(rng, p, n, shift, nu)));
}

Parameter psi_i(int p) { return HerglotzSpec::constant(kI * identity(p)); }

// Taylor coefficients by a plain DFT of the function on a circle, written
// without reference to the library's extraction routine.
std::vector<ComplexMatrix> dft_coefficients(const std::function<ComplexMatrix(cplx)>& f, int count, double r, int nodes) {
    std::vector<ComplexMatrix> values;
    for (int j = 0; j < nodes; ++j) values.push_back(f(std::polar(r, 2.0 * kPi * j / nodes)));
    std::vector<ComplexMatrix> out;
    for (int k = 0; k < count; ++k) {
        ComplexMatrix acc = ComplexMatrix::Zero(values[0].rows(), values[0].cols());
        for (int j = 0; j < nodes; ++j) acc += values[j] * std::polar(1.0, -2.0 * kPi * j * k / nodes);
        out.push_back(acc / (nodes * std::pow(r, k)));
    }
    return out;
}

}  // namespace

TEST_CASE("frame at zero and the scalar example") {
    std::mt19937_64 rng(1);
    const auto t = make_triple(rng, 2, 3, 3.0);
    CHECK((eval_frame(*t, 0.0).U - identity(4)).norm() == 0.0);

    ToeplitzSpec spec;
    spec.p = 1;
    spec.n = 1;
    spec.blocks = {ComplexMatrix::Constant(1, 1, 2.0)};
    spec.nu = ComplexMatrix::Zero(1, 1);
    const StructuredTriple t1 = build_structured_triple(spec);
    ComplexMatrix ones = ComplexMatrix::Ones(2, 2);
    const ComplexMatrix expected = identity(2) - (kI / (2.0 * (1.0 + 0.5 * kI))) * ones * signature_J(1);
    CHECK((eval_frame(t1, 1.0).U - expected).norm() < 1e-15);

    try {
        eval_frame(*t, 2.0 * kI);
        FAIL("expected FramePole");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::FramePole);
    }
}

TEST_CASE("J-unitarity at conjugate pairs") {
    std::mt19937_64 rng(2);
    for (int inst = 0; inst < 4; ++inst) {
        const auto t = make_triple(rng, 1 + inst % 3, 2 + inst, inst % 2 ? 3.0 : -0.5, true);
        for (int k = 0; k < 100; ++k) {
            const cplx z = testsupport::random_upper_point(rng);
            CHECK(j_unitarity_residual(*t, z) <= 1e-10);
        }
    }
}

TEST_CASE("scaled frame is lambda^n U(z(lambda))") {
    std::mt19937_64 rng(3);
    const auto t = make_triple(rng, 2, 4, -0.3, true);
    for (int k = 0; k < 30; ++k) {
        const cplx lambda = testsupport::random_disk_point(rng);
        const ComplexMatrix direct = std::pow(lambda, 4) * eval_frame(*t, cayley(lambda)).U;
        const ComplexMatrix scaled = eval_scaled_frame(*t, lambda);
        CHECK((direct - scaled).norm() <= 1e-10 * std::max(1.0, direct.norm()));
    }
    // lambda = 0 is the limit point 2i of the frame pole; the polynomial stays finite there.
    CHECK(eval_scaled_frame(*t, 0.0).allFinite());
}

TEST_CASE("solution at the identity frame and pair/contractive agreement") {
    std::mt19937_64 rng(4);
    const auto t = make_triple(rng, 2, 3, 3.0);
    const SolutionHandle pair(t, psi_i(2), SolutionMode::Pair);
    CHECK((eval_solution(pair, 0.0) - kI * identity(2)).norm() < 1e-15);

    const ComplexMatrix phi0 = pair_to_contraction(kI * identity(2), kI * identity(2));
    const SolutionHandle contr(t, ContractionSpec{phi0}, SolutionMode::Contractive);
    for (int k = 0; k < 30; ++k) {
        const cplx z = testsupport::random_upper_point(rng);
        CHECK((eval_solution(pair, z) - eval_solution(contr, z)).norm() <= 1e-11 * std::max(1.0, eval_solution(pair, z).norm()));
    }

    // Random strict contraction through both forms.
    const ComplexMatrix g = testsupport::random_matrix(rng, 2, 2);
    const ContractionSpec c{0.6 * g / spectral_norm(g)};
    const SolutionHandle c_contr(t, c, SolutionMode::Contractive);
    const SolutionHandle c_pair(t, c, SolutionMode::Pair);
    for (int k = 0; k < 30; ++k) {
        const cplx z = testsupport::random_upper_point(rng);
        const ComplexMatrix a = eval_solution(c_contr, z);
        CHECK((a - eval_solution(c_pair, z)).norm() <= 1e-10 * std::max(1.0, a.norm()));
    }
}

TEST_CASE("solution class bound from the Pick kernel") {
    std::mt19937_64 rng(5);
    const std::array<cplx, 6> pts = {cplx(0.2, 0.6), cplx(-1.0, 0.3), cplx(1.7, 1.1),
                                     cplx(0.0, 2.5), cplx(-0.3, 0.1), cplx(2.5, 0.4)};
    for (int inst = 0; inst < 6; ++inst) {
        const auto t = make_triple(rng, 1 + inst % 2, 3, inst % 2 ? 3.0 : -0.6);
        const SolutionHandle h(t, psi_i(t->p()), SolutionMode::Pair);
        const int neg = pick_negative_squares([&](cplx z) { return eval_solution(h, z); }, pts);
        CHECK(neg <= t->kappa());
    }
}

TEST_CASE("inverse denominator identity") {
    std::mt19937_64 rng(6);
    const auto t = make_triple(rng, 2, 3, -0.4);
    const SolutionHandle h(t, psi_i(2), SolutionMode::Pair);
    for (int k = 0; k < 20; ++k) {
        const cplx z = testsupport::random_upper_point(rng);
        const FrameEvaluation f = eval_frame(*t, z);
        const FrameEvaluation fc = eval_frame(*t, std::conj(z));
        ComplexMatrix col(4, 2);
        col << kI * identity(2), eval_solution(h, z);
        const ComplexMatrix lhs = -(fc.U.adjoint() * col).topRows(2);
        const ComplexMatrix rhs = (f.c() * (kI * identity(2)) + kI * f.d()).inverse();
        CHECK((lhs - rhs).norm() <= 1e-9 * std::max(1.0, rhs.norm()));
    }
}

TEST_CASE("omega_star interpolates the data") {
    std::mt19937_64 rng(7);
    for (int inst = 0; inst < 4; ++inst) {
        const int p = 1 + inst % 2;
        const int n = 3 + inst % 2;
        const ToeplitzSpec spec = testsupport::random_spec(rng, p, n, inst < 2 ? 4.0 : -0.4, true);
        const auto t = std::make_shared<const StructuredTriple>(build_structured_triple(spec));
        const SolutionHandle h(t, psi_i(p), SolutionMode::Pair);
        CHECK((eval_omega_star(h, 0.0) + kI * eval_solution(h, 2.0 * kI)).norm() < 1e-10);
        const auto coef = dft_coefficients([&](cplx l) { return eval_omega_star(h, l); }, n, 0.05, 64);
        CHECK((coef[0] - (0.5 * spec.blocks[0] - kI * spec.nu)).norm() <= 1e-8 * spec.blocks[0].norm());
        for (int k = 1; k < n; ++k)
            CHECK((coef[k] - spec.blocks[k]).norm() <= 1e-8 * std::max(1.0, spec.blocks[k].norm()));
    }
}

TEST_CASE("omega_star through the scaled frame matches the direct composition") {
    std::mt19937_64 rng(8);
    const auto t = make_triple(rng, 2, 3, -0.5);
    const ComplexMatrix g = testsupport::random_matrix(rng, 2, 2);
    const ContractionSpec c{0.5 * g / spectral_norm(g)};
    for (SolutionMode mode : {SolutionMode::Pair, SolutionMode::Contractive}) {
        const SolutionHandle h(t, c, mode);
        for (int k = 0; k < 20; ++k) {
            const cplx lambda = testsupport::random_disk_point(rng, 0.9);
            const ComplexMatrix direct = -kI * eval_solution(h, 2.0 * kI * (1.0 - lambda) / (1.0 + lambda));
            const ComplexMatrix scaled = eval_omega_star(h, lambda);
            CHECK((direct - scaled).norm() <= 1e-9 * std::max(1.0, direct.norm()));
            CHECK((eval_omega(h, -lambda) - scaled).norm() == 0.0);
        }
    }
}

TEST_CASE("degenerate parameter is refused") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const auto t = make_triple(rng, 1, 3, trial % 2 ? 2.0 : -0.7);
        const YMatrix y = last_row_frame(*t);
        const cplx root = -kI * y.Y(0, 0) / y.Y(0, 1);
        if (root.imag() <= 0.0) continue;
        try {
            SolutionHandle h(t, HerglotzSpec::constant(ComplexMatrix::Constant(1, 1, root)), SolutionMode::Pair);
            FAIL("expected DegenerateParameter");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::DegenerateParameter);
        }
        break;
    }
}

TEST_CASE("G function and A_psi") {
    std::mt19937_64 rng(10);
    const auto t = make_triple(rng, 2, 3, -0.5);
    HerglotzSpec psi = HerglotzSpec::constant(testsupport::random_hermitian(rng, 2) + kI * identity(2));
    psi.B = 0.3 * identity(2);
    for (int k = 0; k < 20; ++k) {
        const cplx z = testsupport::random_upper_point(rng);
        CHECK_NOTHROW(g_function(*t, psi, z));
    }
    // G - I decays like ||Pi|| ||S^{-1}|| / |z| along a ray.
    const double data_scale = 1.0 + t->Pi().norm() * t->S_inv().norm();
    const ComplexMatrix g_far = g_function(*t, HerglotzSpec::constant(kI * identity(2)), cplx(0.0, 1e6));
    CHECK((g_far - identity(2)).norm() <= 1e-6 * data_scale);
    const ComplexMatrix g_farther = g_function(*t, HerglotzSpec::constant(kI * identity(2)), cplx(0.0, 1e7));
    CHECK((g_farther - identity(2)).norm() <= 0.2 * (g_far - identity(2)).norm());

    const ComplexMatrix a0 = a_psi_matrix(*t, ComplexMatrix::Zero(2, 2));
    CHECK((a0 - (t->A() - kI * t->Phi2() * t->Phi1().adjoint() * t->S_inv())).norm() < 1e-12);

    for (int inst = 0; inst < 6; ++inst) {
        const auto ti = make_triple(rng, 1 + inst % 2, 3, inst % 2 ? 3.0 : -0.5);
        const ComplexMatrix a_psi = a_psi_matrix(*ti, kI * identity(ti->p()));
        Eigen::ComplexEigenSolver<ComplexMatrix> es(a_psi);
        int upper = 0;
        for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) upper += es.eigenvalues()(j).imag() > 1e-9;
        CHECK(upper <= ti->kappa());
    }
}
