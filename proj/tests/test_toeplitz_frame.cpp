#include "doctest.h"

#include <Eigen/Eigenvalues>

#include "indef/generator.hpp"
#include "indef/linalg.hpp"
#include "indef/toeplitz_frame.hpp"
#include "test_support.hpp"

using namespace indef;

namespace {

ToeplitzSpec scalar_spec(std::initializer_list<double> s) {
    ToeplitzSpec spec;
    spec.p = 1;
    spec.n = static_cast<int>(s.size());
    for (double v : s) spec.blocks.push_back(ComplexMatrix::Constant(1, 1, v));
    spec.nu = ComplexMatrix::Zero(1, 1);
    return spec;
}

// Brute-force inertia from a general (non-Hermitian) eigensolver.
int brute_negative_count(const ComplexMatrix& h) {
    Eigen::ComplexEigenSolver<ComplexMatrix> es(h);
    int neg = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i).real() < 0.0) ++neg;
    return neg;
}

}  // namespace

TEST_CASE("A has i/2 on the diagonal and i in every strictly lower block") {
    const StructuredTriple t = build_structured_triple(scalar_spec({2.0, 1.0, 0.3}));
    CHECK(t.A()(0, 0) == cplx(0, 0.5));
    CHECK(t.A()(1, 0) == cplx(0, 1));
    CHECK(t.A()(2, 0) == cplx(0, 1));
    CHECK(t.A()(0, 1) == cplx(0, 0));
    CHECK(t.theta_count() == 1);
}

TEST_CASE("two by two example") {
    const StructuredTriple t = build_structured_triple(scalar_spec({2.0, 1.0}));
    CHECK(t.Phi2()(0, 0) == cplx(1, 0));
    CHECK(t.Phi2()(1, 0) == cplx(1, 0));
    CHECK(std::abs(t.Phi1()(0, 0) - cplx(1, 0)) < 1e-15);
    CHECK(std::abs(t.Phi1()(1, 0) - cplx(2, 0)) < 1e-15);
    CHECK(t.kappa() == 0);
    CHECK(t.displacement_residual() < 1e-14);
}

TEST_CASE("displacement identity on random instances") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const int p = 1 + trial % 3;
        const int n = 1 + trial % 7;
        const StructuredTriple t = build_structured_triple(testsupport::random_spec(rng, p, n, 4.0 - trial % 5, true));
        // oracle: both sides of the identity formed directly from the entries
        const ComplexMatrix& s = t.S();
        const ComplexMatrix lhs = t.A() * s - s * t.A().adjoint();
        const ComplexMatrix rhs = kI * t.Pi() * t.J() * t.Pi().adjoint();
        CHECK((lhs - rhs).norm() / s.norm() < 1e-12);
        CHECK(t.displacement_residual() < 1e-12);
    }
}

TEST_CASE("non-Hermitian s0 is rejected") {
    ToeplitzSpec spec = scalar_spec({2.0, 1.0});
    spec.blocks[0](0, 0) = cplx(2.0, 0.5);
    CHECK_THROWS_AS(build_structured_triple(spec), Error);
    try {
        build_structured_triple(spec);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonHermitianInput);
    }
}

TEST_CASE("singular S is rejected") {
    try {
        build_structured_triple(scalar_spec({1.0, 1.0}));
        FAIL("expected SingularS");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularS);
    }
}

TEST_CASE("negative_index") {
    ComplexMatrix h(2, 2);
    h << 2.0, 1.0, 1.0, 2.0;
    CHECK(negative_index(h) == 0);
    h << 1.0, 2.0, 2.0, 1.0;
    CHECK(negative_index(h) == 1);

    std::mt19937_64 rng(3);
    const ComplexMatrix q = testsupport::random_matrix(rng, 6, 6).householderQr().householderQ();
    Eigen::VectorXd spectrum(6);
    spectrum << -2, -1, 1, 1, 3, 5;
    const ComplexMatrix h6 = q * spectrum.cast<cplx>().asDiagonal() * q.adjoint();
    CHECK(negative_index(h6) == 2);
    CHECK(negative_index(7.5 * h6) == 2);
    CHECK(brute_negative_count(h6) == 2);

    spectrum << -2, -1, 1e-14, 1, 3, 5;
    const ComplexMatrix h_amb = q * spectrum.cast<cplx>().asDiagonal() * q.adjoint();
    try {
        negative_index(h_amb);
        FAIL("expected AmbiguousInertia");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::AmbiguousInertia);
    }
}

TEST_CASE("last row frame") {
    ToeplitzSpec spec = scalar_spec({2.0});
    const YMatrix y1 = last_row_frame(build_structured_triple(spec));
    CHECK(std::abs(y1.Y(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(y1.Y(0, 1) - 0.5) < 1e-15);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int p = 1 + trial % 3;
        const int n = 2 + trial % 5;
        const StructuredTriple t = build_structured_triple(testsupport::random_spec(rng, p, n, 3.0 - trial % 4, true));
        const YMatrix y = last_row_frame(t);
        // oracle: last block row of S^{-1} from a fresh dense solve
        const ComplexMatrix e_last = ComplexMatrix::Identity(t.dim(), t.dim()).bottomRows(p);
        const ComplexMatrix row = t.S().adjoint().fullPivLu().solve(e_last.adjoint()).adjoint();
        CHECK((row * t.Pi() - y.Y).norm() / y.Y.norm() < 1e-10);
        CHECK(y.rank_ratio > 1e-12);
        for (int k = 0; k < n; ++k) {
            ComplexMatrix next = k + 1 < n ? y.q[k + 1] : ComplexMatrix::Zero(p, p);
            CHECK((y.t[k] - (y.q[k] - next)).norm() / t.S_inv().norm() < 1e-10);
        }
    }
}

TEST_CASE("degeneracy conditions") {
    const StructuredTriple t = build_structured_triple(scalar_spec({2.0}));
    const Parameter psi_i = HerglotzSpec::constant(kI * identity(1));
    const DegeneracyReport r = degeneracy_conditions(t, psi_i);
    CHECK(r.row_condition);
    CHECK(r.frame_condition);
    // direct oracle for the row condition: [0..0 I] S^{-1} Pi J [psi(2i); iI]
    ComplexMatrix col(2, 1);
    col << kI, kI;
    const cplx direct = (t.S_inv().bottomRows(1) * t.Pi() * t.J() * col)(0, 0);
    CHECK(std::abs(direct - r.det_row_condition) < 1e-14);

    std::mt19937_64 rng(17);
    int agreements = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const int p = 1 + trial % 2;
        const StructuredTriple tt =
            build_structured_triple(testsupport::random_spec(rng, p, 3, trial % 2 ? 3.0 : -0.5));
        const ComplexMatrix c = testsupport::random_hermitian(rng, p);
        const ComplexMatrix g = testsupport::random_matrix(rng, p, p);
        const Parameter psi = HerglotzSpec::constant(c + kI * (identity(p) + g * g.adjoint()));
        const DegeneracyReport rr = degeneracy_conditions(tt, psi);
        agreements += rr.row_condition == rr.frame_condition;
        CHECK(std::abs(std::abs(rr.det_row_condition) - std::abs(rr.det_frame_condition)) <= 1e-9 * std::abs(rr.det_row_condition));
    }
    CHECK(agreements == 40);
}

TEST_CASE("adversarial parameter violates the row condition") {
    // p = 1: i Y1 + Y2 psi = 0 at psi = -i Y1 / Y2; pick an instance where Im psi > 0.
    std::mt19937_64 rng(23);
    int flagged = 0;
    for (int trial = 0; trial < 50 && flagged < 3; ++trial) {
        const StructuredTriple t = build_structured_triple(testsupport::random_spec(rng, 1, 3, trial % 2 ? 2.0 : -0.7));
        const YMatrix y = last_row_frame(t);
        const cplx root = -kI * y.Y(0, 0) / y.Y(0, 1);
        if (root.imag() <= 0.0) continue;
        const Parameter psi = HerglotzSpec::constant(ComplexMatrix::Constant(1, 1, root));
        const DegeneracyReport r = degeneracy_conditions(t, psi);
        CHECK_FALSE(r.row_condition);
        CHECK_FALSE(r.frame_condition);
        ++flagged;
    }
    CHECK(flagged > 0);
}

TEST_CASE("degenerate matrix parameters fail both conditions") {
    std::mt19937_64 rng(31);
    int flagged = 0;
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const StructuredTriple t(generate_instance(seed, 2, 4, 2).spec);
        const auto psi = testsupport::degenerate_parameter(t, rng);
        if (!psi) continue;
        CHECK(linalg::is_positive_semidefinite(imaginary_part(*psi)));
        const DegeneracyReport r = degeneracy_conditions(t, Parameter(HerglotzSpec::constant(*psi)));
        CHECK_FALSE(r.row_condition);
        CHECK_FALSE(r.frame_condition);
        ++flagged;
    }
    CHECK(flagged >= 3);
    // Definite data admits no degenerate constant parameter.
    const StructuredTriple definite(generate_instance(1, 2, 4, 0).spec);
    CHECK_FALSE(testsupport::degenerate_parameter(definite, rng).has_value());
}

TEST_CASE("resolvent closed form") {
    const ComplexMatrix col = resolvent_closed_form(1, 2, 2.0 * kI);
    CHECK(std::abs(col(0, 0) - cplx(0, -1)) < 1e-15);
    CHECK(std::abs(col(1, 0)) < 1e-15);

    std::mt19937_64 rng(29);
    for (int k = 0; k < 20; ++k) {
        const cplx lambda = testsupport::random_disk_point(rng);
        const cplx z = cayley(lambda);
        const cplx ratio = (1.0 + 0.5 * kI * z) / (1.0 - 0.5 * kI * z);
        CHECK(std::abs(ratio + lambda) < 1e-12);
    }

    const StructuredTriple t = build_structured_triple(testsupport::random_spec(rng, 2, 4, 3.0));
    for (int k = 0; k < 20; ++k) {
        const cplx z = testsupport::random_upper_point(rng);
        const ComplexMatrix dense = resolvent_column(t, z);
        CHECK((dense - resolvent_closed_form(2, 4, z)).norm() / dense.norm() < 1e-11);
    }
    try {
        resolvent_column(t, -2.0 * kI);
        FAIL("expected PoleHit");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::PoleHit);
    }
}

TEST_CASE("shifted adjoint determinant") {
    std::mt19937_64 rng(31);
    const StructuredTriple t = build_structured_triple(testsupport::random_spec(rng, 2, 3, 3.0));
    for (int k = 0; k < 50; ++k) {
        const cplx lambda = testsupport::random_disk_point(rng);
        if (std::abs(lambda) < 0.05 || std::abs(lambda + 1.0) < 0.05) continue;
        const cplx dense = shifted_adjoint_det(t, lambda);
        const cplx closed = shifted_adjoint_det_closed_form(2, 3, lambda);
        CHECK(std::abs(dense - closed) <= 1e-9 * std::abs(closed));
    }
}
