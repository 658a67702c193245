#include "doctest.h"

#include "indef/generator.hpp"
#include "indef/szego.hpp"
#include "test_support.hpp"

using namespace indef;

namespace {

SzegoReport flagship_report(int kappa) {
    const GeneratedInstance g = generate_instance(1, 2, 4, kappa);
    const auto t = std::make_shared<const StructuredTriple>(g.spec);
    return szego_experiment(g.spec, SolutionHandle(t, g.param, SolutionMode::Pair), 32);
}

}  // namespace

TEST_CASE("psi == i alone: ratios are exactly 2^p") {
    for (int p : {1, 2}) {
        const HerglotzSpec psi = HerglotzSpec::constant(kI * identity(p));
        const ToeplitzSpec breve = parameter_toeplitz(psi, 16);
        CHECK((breve.blocks[0] - 2.0 * identity(p)).norm() < 1e-14);
        CHECK(breve.nu.norm() < 1e-14);
        const DeterminantSequence seq = determinant_sequence(breve, 16);
        REQUIRE(seq.dets.size() == 16);
        for (cplx r : seq.ratios()) CHECK(std::abs(r - std::pow(2.0, p)) < 1e-12);
        CHECK(entropy_of_parameter(Parameter(psi), 0.0, true).value == 0.0);
    }
}

TEST_CASE("ratios of diagonal sections") {
    ToeplitzSpec spec;
    spec.p = 1;
    spec.n = 3;
    spec.blocks = {ComplexMatrix::Constant(1, 1, -3.0), ComplexMatrix::Zero(1, 1), ComplexMatrix::Zero(1, 1)};
    spec.nu = ComplexMatrix::Zero(1, 1);
    const DeterminantSequence seq = determinant_sequence(spec, 3);
    const std::vector<cplx> r = seq.ratios();
    for (cplx v : r) CHECK(std::abs(v + 3.0) < 1e-14);
    CHECK(seq.kappas == std::vector<int>{1, 2, 3});
}

TEST_CASE("last-row bridge against a direct inverse") {
    std::mt19937_64 rng(3);
    for (int inst = 0; inst < 4; ++inst) {
        const ToeplitzSpec spec = testsupport::random_spec(rng, 2, 5, inst % 2 ? 4.0 : -0.3, true);
        const DeterminantSequence seq = determinant_sequence(spec, 5);
        const BridgeCheck b = determinant_bridge(spec, seq);
        CHECK(b.max_residual < 1e-9);
        // Jacobi: the last block of S(i)^{-1} has determinant Lambda_{i-1} / Lambda_i.
        const ComplexMatrix s = assemble_toeplitz(spec);
        const ComplexMatrix inv = s.inverse();
        const cplx expected = seq.ratios().back();
        CHECK(std::abs(inv.bottomRightCorner(2, 2).determinant() * expected - 1.0) < 1e-9);
    }
}

TEST_CASE("definite flagship: classical and nonclassical limits coincide") {
    const SzegoReport r = flagship_report(0);
    CHECK(r.zeros.total_count == 0);
    CHECK(r.prediction.blaschke_correction == 1.0);
    CHECK(std::abs(r.prediction.nonclassical - r.prediction.classical_symbol) / r.prediction.nonclassical < 1e-5);
    CHECK(r.prediction.forms_agreement < 1e-6);
    CHECK(r.relative_errors.back() < 1e-2);
    CHECK(r.converged);
    CHECK(r.sign_pattern);
    CHECK(r.bridge.max_residual < 1e-9);
    CHECK(r.max_ratio_imag < 1e-10);
}

TEST_CASE("indefinite flagship: the Blaschke correction is needed") {
    const SzegoReport r = flagship_report(1);
    CHECK(r.kappa == 1);
    CHECK(r.prediction.blaschke_correction > 1.0);
    CHECK(r.prediction.forms_agreement < 1e-5);
    CHECK(std::abs(r.prediction.via_q_tilde - r.prediction.nonclassical) / r.prediction.nonclassical < 1e-5);
    // without the correction the symbol integral misses the limit
    CHECK(std::abs(r.ratios.back() - r.prediction.classical_symbol) / r.ratios.back() > 1e-2);
    CHECK(r.relative_errors.back() < 1e-2);
    CHECK(r.monotone);
    CHECK(r.converged);
    CHECK(r.sign_pattern);
    CHECK(r.bridge.max_residual < 1e-9);
}

TEST_CASE("poles of omega_star sit at the reflected zeros of q_tilde") {
    const GeneratedInstance g = generate_instance(1, 2, 4, 1);
    const auto t = std::make_shared<const StructuredTriple>(g.spec);
    const SolutionHandle h(t, g.param, SolutionMode::Pair);
    const DiskZeros z = q_tilde_zeros(h);
    REQUIRE(z.total_count == 1);
    const cplx pole = -z.zeros[0].lambda;
    const double a = eval_omega_star(h, pole + 1e-4).norm() * 1e-4;
    const double b = eval_omega_star(h, pole + 1e-6).norm() * 1e-6;
    CHECK(std::abs(a - b) / b < 1e-2);
}

TEST_CASE("noise floors grow with the conditioning of S(i)") {
    // Seed 59 has a pole of omega_star near |l| = 0.63, so cond S(i) grows
    // geometrically and the constant ratios pick up roundoff near 1e-9.
    const GeneratedInstance g = generate_instance(59, 2, 4, 1);
    const auto t = std::make_shared<const StructuredTriple>(g.spec);
    const SzegoReport r = szego_experiment(g.spec, SolutionHandle(t, g.param, SolutionMode::Pair), 32);
    REQUIRE(r.noise_floors.size() == r.checkpoints.size());
    for (std::size_t k = 0; k < r.noise_floors.size(); ++k) {
        CHECK(r.noise_floors[k] >= kSzegoNoiseFloor);
        CHECK(r.relative_errors[r.checkpoints[k] - 1] <= r.noise_floors[k]);
    }
    CHECK(r.noise_floors.back() > kSzegoNoiseFloor);
    CHECK(r.monotone);
    CHECK(r.converged);
    CHECK(r.bridge.passes(1e-9));
}

TEST_CASE("bridge residuals are held to the larger of tolerance and roundoff") {
    BridgeCheck b;
    b.sizes = {1, 2, 3};
    b.residuals = {1e-12, 5e-9, 1e-10};
    b.roundoff = {1e-15, 1e-8, 1e-14};
    CHECK(b.passes(1e-9));
    CHECK(b.roundoff_limited(1e-9) == 1);
    b.residuals[1] = 2e-8;
    CHECK_FALSE(b.passes(1e-9));
    b.residuals = {NAN, 0.0, 0.0};
    CHECK_FALSE(b.passes(1e-9));
}
