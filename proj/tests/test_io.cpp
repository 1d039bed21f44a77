#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "bnf/checks.hpp"
#include "bnf/io.hpp"

using namespace tnf;
using nlohmann::json;

namespace {

std::string pendulum_json(const char* extra_term = "") {
    std::string terms = R"({
      "alpha": [2],
      "series": {"dim": 1, "real": true, "modes": [
        {"k": [-1], "re": 0.125, "im": 0.0},
        {"k": [0], "re": 0.5, "im": 0.0},
        {"k": [1], "re": 0.125, "im": 0.0}]}
    })";
    if (*extra_term) terms += std::string(",") + extra_term;
    return std::string(R"({"dim": 1, "omega": [1.0], "tau": 1.0, "rho": 1.0,
      "domain_radius": 0.25, "order_M": 3, "terms": [)") + terms + "]}";
}

} // namespace

TEST_CASE("series JSON round trip") {
    rng gen(41);
    for (int i = 0; i < 10; ++i) {
        fourier_series u = random_trig_poly(gen, 1 + i % 2, 6, 4, false);
        fourier_series v = series_from_json(series_to_json(u));
        CHECK(double(wiener_norm(fs_linear_combine(cplx(1), u, cplx(-1), v), 0).value) == 0.0);
        CHECK(v.is_real() == u.is_real());
        // modes must serialize in lexicographic k order
        json j = series_to_json(u);
        mode_index prev;
        for (const auto& mode : j["modes"]) {
            mode_index k = mode["k"].get<mode_index>();
            if (!prev.empty()) CHECK(prev < k);
            prev = k;
        }
    }
}

TEST_CASE("taylor JSON round trip") {
    taylor_fourier f(2, 2, 3);
    homogeneous_part p2(2, 2), p3(2, 3);
    p2.set_term({1, 1}, fourier_series::cosine(2, {1, -1}, 0.25));
    p3.set_term({3, 0}, fourier_series::sine(2, {0, 1}, 0.5));
    f.set_part(p2);
    f.set_part(p3);
    taylor_fourier g = taylor_from_json(taylor_to_json(f));
    CHECK(g.m_min() == 2);
    CHECK(g.m_max() == 3);
    REQUIRE(g.part(3) != nullptr);
    CHECK(double(g.part(3)->term({3, 0})->coeff({0, 1}).im) == doctest::Approx(-0.25));
}

TEST_CASE("problem parsing") {
    SUBCASE("valid pendulum") {
        problem p = problem_from_json(json::parse(pendulum_json()));
        CHECK(p.spec.dim() == 1);
        CHECK(double(p.spec.omega().kappa) == doctest::Approx(1.0));
        CHECK(p.options.order == 3);
        CHECK(p.spec.k_input() == 1);
    }
    SUBCASE("missing field is a schema error") {
        json j = json::parse(pendulum_json());
        j.erase("omega");
        try {
            problem_from_json(j);
            CHECK(false);
        } catch (const error& e) {
            CHECK(e.code() == errc::schema);
        }
    }
    SUBCASE("degree-1 terms rejected") {
        json j = json::parse(pendulum_json(R"({"alpha": [1], "series": {"dim": 1, "real": true,
            "modes": [{"k": [0], "re": 0.1, "im": 0.0}]}})"));
        CHECK_THROWS_AS(problem_from_json(j), error);
    }
    SUBCASE("degree-0 constant is dropped (H(theta,0) = 0 convention)") {
        json j = json::parse(pendulum_json(R"({"alpha": [0], "series": {"dim": 1, "real": true,
            "modes": [{"k": [0], "re": 7.0, "im": 0.0}]}})"));
        problem p = problem_from_json(j);
        CHECK(p.spec.coeffs().part(2) != nullptr);
        CHECK(p.spec.coeffs().parts().size() == 1);
    }
    SUBCASE("resonant omega rejected with the resonant code") {
        json j = json::parse(pendulum_json());
        j["omega"] = {1.0, 0.5};
        j["dim"] = 2;
        j["tau"] = 1.2;
        j["terms"][0]["alpha"] = {2, 0};
        j["terms"][0]["series"]["dim"] = 2;
        for (auto& mode : j["terms"][0]["series"]["modes"])
            mode["k"] = std::vector<int>{mode["k"][0].get<int>(), 0};
        try {
            problem_from_json(j);
            CHECK(false);
        } catch (const error& e) {
            CHECK(e.code() == errc::resonant_mode);
        }
    }
    SUBCASE("prescribed kappa above the empirical minimum rejected") {
        json j = json::parse(pendulum_json());
        j["kappa"] = 1.5;
        CHECK_THROWS_AS(problem_from_json(j), error);
    }
    SUBCASE("tau must exceed dim - 1") {
        json j = json::parse(pendulum_json());
        j["tau"] = -0.5;
        CHECK_THROWS_AS(problem_from_json(j), error);
    }
}

TEST_CASE("result JSON round trip") {
    problem p = problem_from_json(json::parse(pendulum_json()));
    bnf_result res = bnf_run(p.spec, 4);
    json j = result_to_json(res, p.spec, p.options);
    result_bundle back = result_from_json(j);
    CHECK(back.result.order == 4);
    CHECK(back.result.b_parts.has_value());
    CHECK(double(back.result.normal_form_coeff(3, {3})) == doctest::Approx(-0.0625));
    CHECK(back.result.logs.size() == 3);
    // 17 significant digits round-trip doubles exactly; the extended build
    // serializes through double, so only that precision is preserved
    for (const auto& [m, part] : res.g.parts())
        for (const auto& [alpha, series] : part.terms()) {
            const fourier_series* other = back.result.g.part(m)->term(alpha);
            REQUIRE(other != nullptr);
            CHECK(double(wiener_norm(fs_linear_combine(cplx(1), series, cplx(-1), *other), 0)
                             .value) <= 1e-16 * double(wiener_norm(series, 0).value));
        }
}

TEST_CASE("deterministic dump") {
    SUBCASE("17 significant digits") {
        CHECK(format_double(0.1) == "0.10000000000000001");
        CHECK(format_double(0.5) == "0.5");
        CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
    }
    SUBCASE("keys sorted, dumps byte-identical") {
        json j;
        j["zeta"] = 1.5;
        j["alpha"] = json::array({1, 2.25, "x"});
        j["mid"] = json::object();
        std::string a = dump_json(j);
        std::string b = dump_json(j);
        CHECK(a == b);
        CHECK(a.find("\"alpha\"") < a.find("\"mid\""));
        CHECK(a.find("\"mid\"") < a.find("\"zeta\""));
    }
    SUBCASE("result dumps are byte-identical across runs") {
        problem p = problem_from_json(json::parse(pendulum_json()));
        std::string a = dump_json(result_to_json(bnf_run(p.spec, 3), p.spec, p.options));
        std::string b = dump_json(result_to_json(bnf_run(p.spec, 3), p.spec, p.options));
        CHECK(a == b);
    }
}

TEST_CASE("csv writing") {
    std::string path = (std::filesystem::temp_directory_path() / "tnf_test.csv").string();
    write_csv(path, {"a", "b"}, {{1.0, 0.1}, {2.0, 0.25}});
    std::string text = read_text_file(path);
    CHECK(text == "a,b\n1,0.10000000000000001\n2,0.25\n");
    std::remove(path.c_str());
}
