#include "indef/generator.hpp"

#include <cmath>
#include <string>

#include "indef/linalg.hpp"

namespace indef {

double PortableRng::normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

namespace {

ToeplitzSpec draw_base(PortableRng& rng, int p, int n, int terms) {
    std::vector<cplx> zeta;
    std::vector<ComplexMatrix> mass;
    for (int j = 0; j < terms; ++j) {
        const double modulus = 1.3 + rng.uniform();
        zeta.push_back(std::polar(modulus, 2.0 * kPi * rng.uniform()));
    }
    for (int j = 0; j < terms; ++j) {
        ComplexMatrix g(p, p);
        for (int r = 0; r < p; ++r)
            for (int c = 0; c < p; ++c) g(r, c) = rng.complex_normal();
        mass.push_back(hermitian_part(g * g.adjoint()) / static_cast<double>(p) + 0.1 * identity(p));
    }
    ToeplitzSpec spec;
    spec.p = p;
    spec.n = n;
    spec.nu = ComplexMatrix::Zero(p, p);
    ComplexMatrix s0 = 0.2 * identity(p);
    for (const auto& m : mass) s0 += m;
    spec.blocks.push_back(2.0 * s0);
    for (int k = 1; k < n; ++k) {
        ComplexMatrix sk = ComplexMatrix::Zero(p, p);
        for (int j = 0; j < terms; ++j) sk += 2.0 * mass[j] * ipow(zeta[j], -k);
        spec.blocks.push_back(sk);
    }
    return spec;
}

}  // namespace

GeneratedInstance generate_instance(std::uint64_t seed, int p, int n, int kappa_target, const GeneratorOptions& options) {
    if (p <= 0 || n <= 0) fail(ErrorCode::InvalidArgument, "p and n must be positive");
    if (kappa_target < 0 || kappa_target > p * n - 1)
        fail(ErrorCode::InvalidArgument, "kappa_target must lie in [0, pn - 1]");
    PortableRng rng(seed);
    const Parameter psi = HerglotzSpec::constant(kI * identity(p));
    for (int attempt = 1; attempt <= options.max_rejections + 1; ++attempt) {
        ToeplitzSpec spec = draw_base(rng, p, n, options.symbol_terms);
        const Eigen::VectorXd ev = linalg::hermitian_eigenvalues(assemble_toeplitz(spec));
        if (kappa_target > 0) {
            const double mu = 0.5 * (ev(kappa_target - 1) + ev(kappa_target));
            spec.blocks[0] -= mu * identity(p);
        }
        const Eigen::VectorXd shifted = linalg::hermitian_eigenvalues(assemble_toeplitz(spec));
        const double margin = shifted.cwiseAbs().minCoeff() / shifted.cwiseAbs().maxCoeff();
        if (margin <= options.spectrum_margin) continue;
        try {
            const StructuredTriple triple = build_structured_triple(spec);
            if (triple.kappa() != kappa_target) continue;
            if (!degeneracy_conditions(triple, psi).admissible()) continue;
        } catch (const Error&) {
            continue;
        }
        return {std::move(spec), psi, attempt};
    }
    fail(ErrorCode::GenerationExhausted,
         "no admissible instance after " + std::to_string(options.max_rejections) + " rejections");
}

}  // namespace indef
