#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "indef_entropy.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Options {
    std::string scenario_file;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::optional<int> i_max;
    std::optional<double> tol_quadrature;
    std::optional<double> tol_conv;
};

class CallFailed : public std::runtime_error {
public:
    CallFailed(int status, const std::string& what)
        : std::runtime_error(what + ": " + ie_last_error()), status(status) {}
    int status;
};

void check(int status, const char* what) {
    if (status != IE_OK) throw CallFailed(status, what);
}

struct ScenarioHandle {
    ie_scenario* ptr = nullptr;
    ~ScenarioHandle() { ie_scenario_destroy(ptr); }
};

std::string take_string(char* raw) {
    std::string s(raw);
    ie_string_free(raw);
    return s;
}

void load_scenario(const Options& opt, ScenarioHandle& sc) {
    if (opt.scenario_file.empty()) {
        check(ie_scenario_generate(opt.seed.value_or(1), &sc.ptr), "generate scenario");
    } else {
        std::ifstream in(opt.scenario_file, std::ios::binary);
        if (!in) throw std::runtime_error("cannot read scenario file " + opt.scenario_file);
        std::ostringstream text;
        text << in.rdbuf();
        check(ie_scenario_parse(text.str().c_str(), &sc.ptr), "parse scenario");
        if (opt.seed) check(ie_scenario_set_seed(sc.ptr, *opt.seed), "--seed");
    }
    if (opt.i_max) check(ie_scenario_set_i_max(sc.ptr, *opt.i_max), "--i-max");
    if (opt.tol_quadrature) check(ie_scenario_set_tolerance(sc.ptr, "quadrature", *opt.tol_quadrature), "--tol-quadrature");
    if (opt.tol_conv) check(ie_scenario_set_tolerance(sc.ptr, "conv", *opt.tol_conv), "--tol-conv");
}

int run_verb(const Options& opt, const char* experiments) {
    ScenarioHandle sc;
    load_scenario(opt, sc);
    if (experiments) check(ie_scenario_set_experiments(sc.ptr, experiments), "select experiments");
    char* raw = nullptr;
    check(ie_scenario_output_dir(sc.ptr, &raw), "output directory");
    const std::string dir = opt.out_dir.empty() ? take_string(raw) : (ie_string_free(raw), opt.out_dir);
    int passed = 0;
    check(ie_scenario_run(sc.ptr, dir.c_str(), &passed), "run");
    std::cout << (passed ? "PASS " : "FAIL ") << (std::filesystem::path(dir) / "report.json").string() << '\n';
    return passed ? kExitPass : kExitFail;
}

int gen_verb(const Options& opt) {
    ScenarioHandle sc;
    load_scenario(opt, sc);
    char* raw = nullptr;
    check(ie_scenario_to_json(sc.ptr, &raw), "serialize scenario");
    const std::string json = take_string(raw);
    if (opt.out_dir.empty()) {
        std::cout << json;
        return kExitPass;
    }
    std::filesystem::create_directories(opt.out_dir);
    const auto path = std::filesystem::path(opt.out_dir) / "scenario.json";
    std::ofstream out(path, std::ios::binary);
    out << json;
    if (!out) throw std::runtime_error("cannot write " + path.string());
    std::cout << path.string() << '\n';
    return kExitPass;
}

void add_shared_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--scenario", opt.scenario_file, "Scenario JSON file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", opt.seed, "Seed (generated scenarios and random checks)");
    cmd->add_option("--out", opt.out_dir, "Output directory");
    cmd->add_option("--i-max", opt.i_max, "Largest section size for the Szego ratios")->check(CLI::PositiveNumber);
    cmd->add_option("--tol-quadrature", opt.tol_quadrature, "Quadrature tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--tol-conv", opt.tol_conv, "Szego convergence tolerance")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Indefinite matrix Caratheodory problems: solutions, entropy and Szego limits"};
    app.set_version_flag("--version", std::string(ie_version()));
    app.require_subcommand(1);

    Options opt;
    struct Verb {
        const char* name;
        const char* help;
        const char* experiments;  // nullptr: the scenario's own list
    };
    const Verb verbs[] = {
        {"check", "Frame identities on seeded instances", "identity_suite"},
        {"solve", "Interpolation, entropy identity and outer check", "interpolation,entropy_identity,outer_check"},
        {"szego", "Determinant ratios against the nonclassical limit", "szego"},
        {"run", "Every experiment listed in the scenario", nullptr},
    };
    for (const auto& v : verbs) add_shared_flags(app.add_subcommand(v.name, v.help), opt);
    add_shared_flags(app.add_subcommand("gen", "Write a generated or normalized scenario file"), opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitPass : kExitUsage;
    }

    try {
        for (const auto& v : verbs)
            if (app.got_subcommand(v.name)) return run_verb(opt, v.experiments);
        return gen_verb(opt);
    } catch (const CallFailed& e) {
        std::cerr << "indef-entropy: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "indef-entropy: " << e.what() << '\n';
        return kExitUsage;
    }
}
