#include "doctest.h"

#include <array>

#include "indef/parameter_functions.hpp"
#include "test_support.hpp"

using namespace indef;

namespace {

ComplexMatrix scalar(cplx v) { return ComplexMatrix::Constant(1, 1, v); }

ComplexMatrix random_strict_contraction(std::mt19937_64& rng, int p) {
    const ComplexMatrix g = testsupport::random_matrix(rng, p, p);
    return 0.9 * g / spectral_norm(g);
}

}  // namespace

TEST_CASE("herglotz evaluation") {
    const HerglotzSpec psi_i = HerglotzSpec::constant(kI * identity(2));
    CHECK((eval_herglotz(psi_i, cplx(0.3, 1.2)) - kI * identity(2)).norm() < 1e-15);

    HerglotzSpec linear;
    linear.B = identity(1);
    linear.C = ComplexMatrix::Zero(1, 1);
    linear.imag_offset = ComplexMatrix::Zero(1, 1);
    CHECK(std::abs(eval_herglotz(linear, cplx(1, 1))(0, 0) - cplx(1, 1)) < 1e-15);

    HerglotzSpec pole;
    pole.B = ComplexMatrix::Zero(1, 1);
    pole.C = ComplexMatrix::Zero(1, 1);
    pole.imag_offset = ComplexMatrix::Zero(1, 1);
    pole.poles = {1.0};
    pole.residues = {identity(1)};
    pole.validate();
    CHECK(std::abs(eval_herglotz(pole, kI)(0, 0) - cplx(0.5, 0.5)) < 1e-15);
    try {
        eval_herglotz(pole, cplx(1.0 + 1e-11, 0.0));
        FAIL("expected PoleProximity");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::PoleProximity);
    }
}

TEST_CASE("herglotz validation") {
    HerglotzSpec bad = HerglotzSpec::constant(scalar(cplx(0.0, 1.0)));
    bad.B = scalar(-1.0);
    CHECK_THROWS_AS(bad.validate(), Error);

    HerglotzSpec nonherm = HerglotzSpec::constant(kI * identity(2));
    nonherm.C(0, 1) = 1.0;
    try {
        nonherm.validate();
        FAIL("expected NonHermitianInput");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonHermitianInput);
    }

    // Positive imaginary part on random points in C+ (oracle: direct Hermitian eigenvalues).
    std::mt19937_64 rng(2);
    HerglotzSpec psi;
    const ComplexMatrix g = testsupport::random_matrix(rng, 2, 2);
    psi.B = 0.2 * g * g.adjoint();
    psi.C = testsupport::random_hermitian(rng, 2);
    psi.imag_offset = identity(2);
    psi.poles = {-0.7, 1.3};
    psi.residues = {identity(2), 0.5 * g.adjoint() * g};
    psi.validate();
    for (int k = 0; k < 20; ++k) {
        const ComplexMatrix v = eval_herglotz(psi, testsupport::random_upper_point(rng));
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(imaginary_part(v));
        CHECK(es.eigenvalues()(0) > 0.0);
    }
}

TEST_CASE("pick kernel") {
    const std::array<cplx, 4> pts = {cplx(0.1, 1.0), cplx(1.0, 0.5), cplx(-2.0, 0.3), cplx(0.4, 2.0)};
    CHECK(pick_negative_squares([](cplx z) { return scalar(z); }, pts) == 0);
    // -1/z is Nevanlinna; the kernel of 1/z is -1/(z_i conj z_k), of rank one.
    CHECK(pick_negative_squares([](cplx z) { return scalar(-1.0 / z); }, pts) == 0);
    CHECK(pick_negative_squares([](cplx z) { return scalar(1.0 / z); }, pts) == 1);
    // z^3 is not a Nevanlinna function.
    CHECK(pick_negative_squares([](cplx z) { return scalar(z * z * z); }, pts) >= 1);
}

TEST_CASE("pair to contraction") {
    const ComplexMatrix i2 = kI * identity(2);
    CHECK(pair_to_contraction(i2, i2).norm() < 1e-15);
    CHECK((pair_to_contraction(identity(2), ComplexMatrix::Zero(2, 2)) + identity(2)).norm() < 1e-15);

    std::mt19937_64 rng(7);
    for (int k = 0; k < 100; ++k) {
        const int p = 1 + k % 3;
        const ComplexMatrix phi0 = random_strict_contraction(rng, p);
        const MatrixPair pq = contraction_to_pair(phi0);
        // property-J of the pair
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(pq.P.adjoint() * pq.Q + pq.Q.adjoint() * pq.P));
        CHECK(es.eigenvalues()(0) > -1e-12);
        const ComplexMatrix back = pair_to_contraction(pq.P, pq.Q);
        CHECK((back - phi0).norm() < 1e-12);
        CHECK(spectral_norm(back) <= 1.0 + 1e-12);
    }

    const ComplexMatrix w = rotation_W(2);
    CHECK((w.adjoint() * signature_J(2) * w - signature_j(2)).norm() < 1e-15);
}

TEST_CASE("contraction validation and equivalent nevanlinna parameter") {
    ContractionSpec edge{identity(2)};
    CHECK_THROWS_AS(edge.validate(), Error);

    std::mt19937_64 rng(9);
    const ContractionSpec c{random_strict_contraction(rng, 2)};
    c.validate();
    const HerglotzSpec psi = herglotz_from_contraction(c);
    psi.validate();
    // The pair {psi, iI} maps back to the contraction.
    CHECK((pair_to_contraction(eval_herglotz(psi, kI), kI * identity(2)) - c.phi0).norm() < 1e-12);
}

TEST_CASE("cayley maps") {
    CHECK(std::abs(cayley(0.0) - 2.0 * kI) < 1e-15);
    CHECK(std::abs(cayley(-1.0)) < 1e-15);
    try {
        cayley(1.0);
        FAIL("expected BoundaryPole");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BoundaryPole);
    }
    std::mt19937_64 rng(13);
    for (int k = 0; k < 50; ++k) {
        const cplx lambda = testsupport::random_disk_point(rng);
        const cplx z = cayley(lambda);
        CHECK(z.imag() > 0.0);
        CHECK(std::abs(cayley_inverse(z) - lambda) < 1e-13);
    }
    CHECK(std::abs(boundary_xi(kPi)) < 1e-14);
    CHECK(std::abs(boundary_xi(kPi / 2) + 2.0) < 1e-14);
    for (int k = 1; k < 1000; ++k) {
        const double theta = 2.0 * kPi * k / 1000.0;
        // oracle: the cotangent form -2 cot(theta / 2)
        CHECK(std::abs(boundary_xi(theta) + 2.0 / std::tan(theta / 2.0)) < 1e-9 * std::max(1.0, std::abs(boundary_xi(theta))));
    }
}
