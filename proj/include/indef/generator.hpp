#pragma once

#include <cstdint>
#include <random>

#include "indef/parameter_functions.hpp"
#include "indef/toeplitz_frame.hpp"

namespace indef {

/// Portable draws on top of std::mt19937_64, whose output sequence is fixed
/// by the standard. The distribution transforms are written out here because
/// the std:: distributions are implementation-defined.
class PortableRng {
public:
    explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal by Box-Muller; one value per call, no caching.
    double normal();

    cplx complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

private:
    std::mt19937_64 engine_;
};

struct GeneratorOptions {
    double spectrum_margin = 1e-3;  // min |eig| / max |eig| of S(n)
    int max_rejections = 200;
    int symbol_terms = 2;
};

struct GeneratedInstance {
    ToeplitzSpec spec;
    Parameter param;
    int attempts = 0;
};

/// Deterministic in (seed, p, n, kappa_target). Draws a positive definite
/// Toeplitz base from a rational Caratheodory symbol
///
///   a_0 + sum_j m_j (zeta_j + lambda) / (zeta_j - lambda),  |zeta_j| > 1,
///
/// then shifts s_0 by -mu I with mu between the kappa-th and (kappa+1)-th
/// eigenvalues of S(n). The parameter is psi == i. Redraws when the spectrum
/// margin or the nondegeneracy condition fails. Throws GenerationExhausted.
GeneratedInstance generate_instance(std::uint64_t seed, int p, int n, int kappa_target,
                                    const GeneratorOptions& options = {});

}  // namespace indef
