#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "indef/parameter_functions.hpp"
#include "indef/toeplitz_frame.hpp"

namespace indef {

inline constexpr int kSchemaVersion = 1;

enum class Experiment { IdentitySuite, Interpolation, EntropyIdentity, OuterCheck, Szego };

std::string_view experiment_name(Experiment e);

/// Throws InvalidArgument for unknown names.
Experiment parse_experiment(std::string_view name);

/// Every threshold a scenario run compares against. Embedded in each report.
struct Tolerances {
    double displacement = 1e-12;
    double j_unitarity = 1e-10;
    double frame_identity = 1e-9;   // det(A^* - 1/z) and resolvent closed forms
    double interpolation = 1e-8;
    double entropy_identity = 1e-5;
    double contractive_agreement = 2e-5;
    double outer = 1e-6;
    double bridge = 1e-9;
    double exact_ratio = 1e-12;
    double quadrature = 1e-8;
    double conv = 1e-2;
};

/// Sets a tolerance by its report key ("quadrature", "conv", ...). Throws
/// InvalidArgument for unknown keys or nonpositive values.
void set_tolerance(Tolerances& t, std::string_view key, double value);

struct Scenario {
    std::string name = "scenario";
    std::uint64_t seed = 1;
    int p = 2;
    int n = 4;
    // Either explicit data or a generator directive.
    std::optional<ToeplitzSpec> instance;
    int kappa_target = 0;
    double spectrum_margin = 1e-3;
    std::optional<Parameter> parameter;  // empty: psi == i
    bool contractive = false;
    std::vector<Experiment> experiments;
    Tolerances tolerances;
    int i_max = 32;
    int extension_depth = 16;
    int identity_points = 50;
    int unitarity_pairs = 100;
    int condition_draws = 100;
    std::vector<cplx> lambda_tilde = {0.0, {0.3, 0.2}, -0.5};
    std::string output_dir = "out";
};

/// Scenario JSON (schema_version 1). Throws InvalidArgument with the offending
/// field in the message.
Scenario parse_scenario(std::string_view json_text);
std::string dump_scenario(const Scenario& scenario);

/// The generator-directive scenario for a seed with every experiment enabled.
Scenario generated_scenario(std::uint64_t seed, int p = 2, int n = 4, int kappa_target = 1);

struct RunResult {
    bool passed = false;
    std::string report_json;
    std::vector<std::filesystem::path> files;
    bool cache_hit = false;
};

/// Runs the requested experiments in dependency order and writes report.json
/// plus one CSV per experiment family into out_dir. Module errors are recorded
/// per experiment; the run continues through independent experiments. The
/// Taylor extension is cached under out_dir/.cache and reused when present.
/// Throws Io when out_dir cannot be written.
RunResult run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir);

/// "<version>" embedded in reports.
std::string_view library_version();

}  // namespace indef
