#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "indef_entropy.h"

// Only the C header is visible here; the checks go through the shared library.

namespace {

using cplx = std::complex<double>;

std::vector<double> identity_times(int p, cplx c) {
    std::vector<double> m(2 * p * p, 0.0);
    for (int i = 0; i < p; ++i) {
        m[2 * (i * p + i)] = c.real();
        m[2 * (i * p + i) + 1] = c.imag();
    }
    return m;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("status names and version") {
    CHECK(std::strlen(ie_version()) > 0);
    CHECK(std::string(ie_status_name(IE_OK)) == "Ok");
    CHECK(std::string(ie_status_name(IE_SINGULAR_S)) == "SingularS");
    CHECK(std::string(ie_status_name(IE_IO)) == "Io");
    CHECK(std::string(ie_status_name(12345)) == "Unknown");
}

TEST_CASE("scalar data through the C API") {
    // s0 = 2, s1 = 0.5: S(2) = [[2, .5], [.5, 2]] is positive definite.
    const double blocks[] = {2.0, 0.0, 0.5, 0.0};
    ie_triple* t = nullptr;
    REQUIRE(ie_triple_create(1, 2, blocks, nullptr, &t) == IE_OK);
    int p = 0, n = 0, kappa = -1;
    REQUIRE(ie_triple_shape(t, &p, &n, &kappa) == IE_OK);
    CHECK(p == 1);
    CHECK(n == 2);
    CHECK(kappa == 0);
    double r = 1.0;
    REQUIRE(ie_triple_displacement_residual(t, &r) == IE_OK);
    CHECK(r < 1e-12);
    REQUIRE(ie_triple_j_unitarity(t, 0.3, 0.7, &r) == IE_OK);
    CHECK(r < 1e-10);

    ie_solution* s = nullptr;
    REQUIRE(ie_solution_create(t, nullptr, IE_MODE_PAIR, &s) == IE_OK);
    // omega_star(0) = s0/2 - i nu = 1.
    double w[2];
    REQUIRE(ie_solution_omega_star(s, 0.0, 0.0, w) == IE_OK);
    CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(w[1]) < 1e-10);
    int total = -1, distinct = -1;
    REQUIRE(ie_solution_zeros(s, &total, &distinct, nullptr, 0) == IE_OK);
    CHECK(total == 0);
    double e = NAN;
    REQUIRE(ie_solution_entropy(s, 0.0, 0.0, 1, &e) == IE_OK);
    CHECK(std::isfinite(e));
    ie_solution_destroy(s);
    ie_triple_destroy(t);
}

TEST_CASE("errors come back as codes with a message") {
    const double singular[] = {1.0, 0.0, 1.0, 0.0};  // S(2) = [[1,1],[1,1]]
    ie_triple* t = nullptr;
    CHECK(ie_triple_create(1, 2, singular, nullptr, &t) == IE_SINGULAR_S);
    CHECK(t == nullptr);
    CHECK(std::strlen(ie_last_error()) > 0);

    const double non_hermitian[] = {1.0, 0.5};
    CHECK(ie_triple_create(1, 1, non_hermitian, nullptr, &t) == IE_NON_HERMITIAN_INPUT);
    CHECK(ie_triple_create(1, 1, nullptr, nullptr, &t) == IE_INVALID_ARGUMENT);

    ie_scenario* sc = nullptr;
    CHECK(ie_scenario_parse("{\"schema_version\": 1}", &sc) == IE_INVALID_ARGUMENT);
    CHECK(std::string(ie_last_error()).find("instance") != std::string::npos);
}

TEST_CASE("generated instance with a contraction parameter") {
    ie_triple* t = nullptr;
    REQUIRE(ie_triple_generate(3, 2, 3, 1, &t) == IE_OK);
    int kappa = -1;
    REQUIRE(ie_triple_shape(t, nullptr, nullptr, &kappa) == IE_OK);
    CHECK(kappa == 1);

    const std::vector<double> half = identity_times(2, 0.5);
    ie_solution* s = nullptr;
    REQUIRE(ie_solution_create_contraction(t, half.data(), &s) == IE_OK);
    double v[8];
    REQUIRE(ie_solution_eval(s, 0.2, 1.5, v) == IE_OK);
    for (double x : v) CHECK(std::isfinite(x));
    int total = 0, distinct = 0;
    double zeros[4];
    REQUIRE(ie_solution_zeros(s, &total, &distinct, zeros, 2) == IE_OK);
    CHECK(distinct <= kappa + 1);
    for (int k = 0; k < distinct; ++k) {
        double q[2];
        REQUIRE(ie_solution_q_tilde(s, zeros[2 * k], zeros[2 * k + 1], q) == IE_OK);
        CHECK(std::hypot(q[0], q[1]) < 1e-6);
    }
    ie_solution_destroy(s);

    const std::vector<double> bad = identity_times(2, 2.0);  // not a contraction
    CHECK(ie_solution_create_contraction(t, bad.data(), &s) != IE_OK);
    CHECK(ie_solution_create(t, nullptr, 7, &s) == IE_INVALID_ARGUMENT);
    ie_triple_destroy(t);
}

TEST_CASE("scenario run through the C API is reproducible") {
    ie_scenario* sc = nullptr;
    REQUIRE(ie_scenario_generate(9, &sc) == IE_OK);
    REQUIRE(ie_scenario_set_experiments(sc, "szego,interpolation") == IE_OK);
    REQUIRE(ie_scenario_set_i_max(sc, 16) == IE_OK);
    REQUIRE(ie_scenario_set_tolerance(sc, "conv", 0.05) == IE_OK);
    CHECK(ie_scenario_set_tolerance(sc, "conv", -1.0) == IE_INVALID_ARGUMENT);
    CHECK(ie_scenario_set_experiments(sc, "interpolation,nope") == IE_INVALID_ARGUMENT);

    char* text = nullptr;
    REQUIRE(ie_scenario_to_json(sc, &text) == IE_OK);
    const std::string json(text);
    ie_string_free(text);
    CHECK(json.find("\"szego\"") != std::string::npos);
    CHECK(json.find("\"identity_suite\"") == std::string::npos);

    ie_scenario* again = nullptr;
    REQUIRE(ie_scenario_parse(json.c_str(), &again) == IE_OK);
    REQUIRE(ie_scenario_to_json(again, &text) == IE_OK);
    CHECK(std::string(text) == json);
    ie_string_free(text);

    const auto a = std::filesystem::temp_directory_path() / "indef_test_capi_a";
    const auto b = std::filesystem::temp_directory_path() / "indef_test_capi_b";
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
    int passed = -1;
    REQUIRE(ie_scenario_run(sc, a.string().c_str(), &passed) == IE_OK);
    CHECK(passed == 1);
    REQUIRE(ie_scenario_run(again, b.string().c_str(), &passed) == IE_OK);
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
    CHECK(std::filesystem::exists(a / "szego.csv"));
    CHECK_FALSE(std::filesystem::exists(a / "entropy.csv"));
    ie_scenario_destroy(again);
    ie_scenario_destroy(sc);
}
