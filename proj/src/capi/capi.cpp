#include "indef_entropy.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "indef/entropy.hpp"
#include "indef/frame_lft.hpp"
#include "indef/generator.hpp"
#include "indef/scenario.hpp"

struct ie_triple {
    std::shared_ptr<const indef::StructuredTriple> triple;
};

struct ie_solution {
    indef::SolutionHandle handle;
};

struct ie_scenario {
    indef::Scenario scenario;
};

namespace {

using indef::ComplexMatrix;
using indef::cplx;

thread_local std::string last_error;

template <class F>
int guarded(F&& f) {
    try {
        f();
        last_error.clear();
        return IE_OK;
    } catch (const indef::Error& e) {
        last_error = e.what();
        return static_cast<int>(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return IE_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return IE_UNKNOWN;
    }
}

void require(bool ok, const char* what) {
    if (!ok) indef::fail(indef::ErrorCode::InvalidArgument, what);
}

ComplexMatrix read_matrix(const double* data, int p) {
    ComplexMatrix m(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) m(i, j) = cplx(data[2 * (i * p + j)], data[2 * (i * p + j) + 1]);
    return m;
}

void write_matrix(const ComplexMatrix& m, double* out) {
    const auto p = m.rows();
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out[2 * (i * m.cols() + j)] = m(i, j).real();
            out[2 * (i * m.cols() + j) + 1] = m(i, j).imag();
        }
}

char* duplicate(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* ie_version(void) { return indef::library_version().data(); }

const char* ie_status_name(int status) {
    if (status == IE_UNKNOWN) return "Unknown";
    if (status < 0 || status > IE_INTERNAL) return "Unknown";
    return indef::error_code_name(static_cast<indef::ErrorCode>(status)).data();
}

const char* ie_last_error(void) { return last_error.c_str(); }

int ie_triple_create(int p, int n, const double* blocks, const double* nu, ie_triple** out) {
    return guarded([&] {
        require(out && blocks && p > 0 && n > 0, "ie_triple_create: null pointer or nonpositive size");
        indef::ToeplitzSpec spec;
        spec.p = p;
        spec.n = n;
        for (int k = 0; k < n; ++k) spec.blocks.push_back(read_matrix(blocks + 2 * p * p * k, p));
        spec.nu = nu ? read_matrix(nu, p) : ComplexMatrix::Zero(p, p);
        *out = new ie_triple{std::make_shared<const indef::StructuredTriple>(spec)};
    });
}

int ie_triple_generate(uint64_t seed, int p, int n, int kappa_target, ie_triple** out) {
    return guarded([&] {
        require(out != nullptr, "ie_triple_generate: null output");
        const indef::GeneratedInstance g = indef::generate_instance(seed, p, n, kappa_target);
        *out = new ie_triple{std::make_shared<const indef::StructuredTriple>(g.spec)};
    });
}

void ie_triple_destroy(ie_triple* triple) { delete triple; }

int ie_triple_shape(const ie_triple* triple, int* p, int* n, int* kappa) {
    return guarded([&] {
        require(triple != nullptr, "ie_triple_shape: null triple");
        if (p) *p = triple->triple->p();
        if (n) *n = triple->triple->n();
        if (kappa) *kappa = triple->triple->kappa();
    });
}

int ie_triple_displacement_residual(const ie_triple* triple, double* out) {
    return guarded([&] {
        require(triple && out, "ie_triple_displacement_residual: null pointer");
        *out = triple->triple->displacement_residual();
    });
}

int ie_triple_j_unitarity(const ie_triple* triple, double z_re, double z_im, double* out) {
    return guarded([&] {
        require(triple && out, "ie_triple_j_unitarity: null pointer");
        *out = indef::j_unitarity_residual(*triple->triple, cplx(z_re, z_im));
    });
}

int ie_solution_create(const ie_triple* triple, const double* psi, int mode, ie_solution** out) {
    return guarded([&] {
        require(triple && out, "ie_solution_create: null pointer");
        require(mode == IE_MODE_PAIR || mode == IE_MODE_CONTRACTIVE, "ie_solution_create: unknown mode");
        const int p = triple->triple->p();
        const ComplexMatrix value = psi ? read_matrix(psi, p) : ComplexMatrix(indef::kI * indef::identity(p));
        *out = new ie_solution{indef::SolutionHandle(
            triple->triple, indef::HerglotzSpec::constant(value),
            mode == IE_MODE_PAIR ? indef::SolutionMode::Pair : indef::SolutionMode::Contractive)};
    });
}

int ie_solution_create_contraction(const ie_triple* triple, const double* phi0, ie_solution** out) {
    return guarded([&] {
        require(triple && phi0 && out, "ie_solution_create_contraction: null pointer");
        indef::ContractionSpec c;
        c.phi0 = read_matrix(phi0, triple->triple->p());
        *out = new ie_solution{indef::SolutionHandle(triple->triple, c, indef::SolutionMode::Contractive)};
    });
}

void ie_solution_destroy(ie_solution* solution) { delete solution; }

int ie_solution_eval(const ie_solution* solution, double z_re, double z_im, double* out) {
    return guarded([&] {
        require(solution && out, "ie_solution_eval: null pointer");
        write_matrix(indef::eval_solution(solution->handle, cplx(z_re, z_im)), out);
    });
}

int ie_solution_omega_star(const ie_solution* solution, double l_re, double l_im, double* out) {
    return guarded([&] {
        require(solution && out, "ie_solution_omega_star: null pointer");
        write_matrix(indef::eval_omega_star(solution->handle, cplx(l_re, l_im)), out);
    });
}

int ie_solution_q_tilde(const ie_solution* solution, double l_re, double l_im, double* out) {
    return guarded([&] {
        require(solution && out, "ie_solution_q_tilde: null pointer");
        const cplx q = indef::q_tilde(solution->handle, cplx(l_re, l_im));
        out[0] = q.real();
        out[1] = q.imag();
    });
}

int ie_solution_entropy(const ie_solution* solution, double l_re, double l_im, int star, double* out) {
    return guarded([&] {
        require(solution && out, "ie_solution_entropy: null pointer");
        *out = indef::entropy_of_solution(solution->handle, cplx(l_re, l_im), star != 0).value;
    });
}

int ie_solution_zeros(const ie_solution* solution, int* total, int* distinct, double* lambdas, int capacity) {
    return guarded([&] {
        require(solution != nullptr, "ie_solution_zeros: null solution");
        const indef::DiskZeros z = indef::q_tilde_zeros(solution->handle);
        if (total) *total = z.total_count;
        if (distinct) *distinct = z.distinct_count;
        if (lambdas)
            for (int k = 0; k < capacity && k < z.distinct_count; ++k) {
                lambdas[2 * k] = z.zeros[k].lambda.real();
                lambdas[2 * k + 1] = z.zeros[k].lambda.imag();
            }
    });
}

int ie_scenario_parse(const char* json, ie_scenario** out) {
    return guarded([&] {
        require(json && out, "ie_scenario_parse: null pointer");
        *out = new ie_scenario{indef::parse_scenario(json)};
    });
}

int ie_scenario_generate(uint64_t seed, ie_scenario** out) {
    return guarded([&] {
        require(out != nullptr, "ie_scenario_generate: null output");
        *out = new ie_scenario{indef::generated_scenario(seed)};
    });
}

void ie_scenario_destroy(ie_scenario* scenario) { delete scenario; }

int ie_scenario_set_seed(ie_scenario* scenario, uint64_t seed) {
    return guarded([&] {
        require(scenario != nullptr, "ie_scenario_set_seed: null scenario");
        scenario->scenario.seed = seed;
    });
}

int ie_scenario_set_i_max(ie_scenario* scenario, int i_max) {
    return guarded([&] {
        require(scenario != nullptr, "ie_scenario_set_i_max: null scenario");
        require(i_max >= scenario->scenario.n, "ie_scenario_set_i_max: i_max must be at least n");
        scenario->scenario.i_max = i_max;
    });
}

int ie_scenario_set_tolerance(ie_scenario* scenario, const char* key, double value) {
    return guarded([&] {
        require(scenario && key, "ie_scenario_set_tolerance: null pointer");
        indef::set_tolerance(scenario->scenario.tolerances, key, value);
    });
}

int ie_scenario_set_experiments(ie_scenario* scenario, const char* names) {
    return guarded([&] {
        require(scenario && names, "ie_scenario_set_experiments: null pointer");
        std::vector<indef::Experiment> chosen;
        std::string list(names);
        std::size_t start = 0;
        while (start <= list.size()) {
            const std::size_t end = std::min(list.find(',', start), list.size());
            const std::string name = list.substr(start, end - start);
            if (!name.empty()) chosen.push_back(indef::parse_experiment(name));
            start = end + 1;
        }
        require(!chosen.empty(), "ie_scenario_set_experiments: empty list");
        // Keep the canonical dependency order.
        std::vector<indef::Experiment> ordered;
        for (auto e : {indef::Experiment::IdentitySuite, indef::Experiment::Interpolation,
                       indef::Experiment::EntropyIdentity, indef::Experiment::OuterCheck, indef::Experiment::Szego})
            if (std::find(chosen.begin(), chosen.end(), e) != chosen.end()) ordered.push_back(e);
        scenario->scenario.experiments = ordered;
    });
}

int ie_scenario_to_json(const ie_scenario* scenario, char** out) {
    return guarded([&] {
        require(scenario && out, "ie_scenario_to_json: null pointer");
        *out = duplicate(indef::dump_scenario(scenario->scenario));
    });
}

int ie_scenario_output_dir(const ie_scenario* scenario, char** out) {
    return guarded([&] {
        require(scenario && out, "ie_scenario_output_dir: null pointer");
        *out = duplicate(scenario->scenario.output_dir);
    });
}

int ie_scenario_run(const ie_scenario* scenario, const char* out_dir, int* passed) {
    return guarded([&] {
        require(scenario != nullptr, "ie_scenario_run: null scenario");
        const std::string dir = out_dir ? out_dir : scenario->scenario.output_dir;
        const indef::RunResult r = indef::run_scenario(scenario->scenario, dir);
        if (passed) *passed = r.passed ? 1 : 0;
    });
}

void ie_string_free(char* text) { std::free(text); }

}  // extern "C"
