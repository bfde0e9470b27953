#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "duffing/errors.hpp"
#include "duffing/model_config.hpp"
#include "duffing/reports.hpp"

using namespace duffing;

TEST_CASE("model config round trip") {
    const std::string text = R"({
        "g": {"kind": "semilinear", "lambda_lo": 1.0, "lambda_hi": 3.0,
              "growth": 4.0, "smoothing": 0.05},
        "forcing": {"constant": 0.0, "cos": [0.1], "sin": []},
        "impulse": {"t1": 1.5707963267948966}
    })";
    const auto cfg = ModelConfig::from_json_text(text);
    const auto sys = cfg.build();
    CHECK(sys.g.K == 9.0);
    CHECK(sys.forcing.cos_coeffs.size() == 1);
    CHECK(sys.impulse.t1 == doctest::Approx(1.5707963267948966));

    const auto again = ModelConfig::from_json_text(cfg.to_json());
    CHECK(again.to_json() == cfg.to_json());
}

TEST_CASE("model config validation") {
    CHECK_THROWS_AS(ModelConfig::from_json_text("not json"), ConfigError);
    CHECK_THROWS_AS(ModelConfig::from_json_text(R"({"g": {"kind": "cubic"}})"), ConfigError);
    CHECK_THROWS_AS(ModelConfig::from_json_text(R"({"g": {"kind": "linear"}})"), ConfigError);
    CHECK_THROWS_AS(
        ModelConfig::from_json_text(R"({"g": {"kind": "semilinear"}, "impulse": {"t1": 0}})"),
        ConfigError);
    // t1 outside [0, 2*pi)
    auto cfg = ModelConfig::from_json_text(R"({"g": {"kind": "linear"}, "impulse": {"t1": 7.0}})");
    CHECK_THROWS_AS(cfg.build(), ConfigError);
    CHECK_THROWS_AS(ModelConfig::from_file("/nonexistent/model.json"), ConfigError);
}

TEST_CASE("csv and json outputs are deterministic") {
    Provenance prov;
    prov.command = "test";
    prov.config_json = R"({"g":{"kind":"linear"}})";
    prov.seed = 42;

    std::vector<TauRow> rows{{1.0, 1.4142135623730951, 1.4142135623730951, 6.283185307179586},
                             {2.0, 2.0, 2.0, 6.283185307179586}};
    std::ostringstream a, b;
    write_tau_scan_csv(a, prov, rows);
    write_tau_scan_csv(b, prov, rows);
    CHECK(a.str() == b.str());
    CHECK(a.str().find("c,h,h1,tau") != std::string::npos);
    CHECK(a.str().find("# seed: 42") != std::string::npos);
    // full precision round trip
    CHECK(a.str().find("1.4142135623730951") != std::string::npos);

    AnnulusSpec an;
    an.a = 100.0;
    an.b = 460.0;
    an.m = 2;
    an.alpha = 0.48;
    TwistReport rep;
    rep.pass = true;
    rep.beta1 = 2.6;
    rep.beta2 = 2.2;
    rep.boundary_samples = 64;
    const auto doc = nlohmann::json::parse(twist_report_json(prov, an, rep));
    CHECK(doc["verdict"] == "pass");
    CHECK(doc["beta1"] == 2.6);
    CHECK(doc["samples"] == 64);
    CHECK(doc["provenance"]["seed"] == 42);

    OrbitRecord rec;
    rec.point = {0.0, 1.0};
    rec.residual = 1e-12;
    rec.min_period_factor = 1;
    const auto orb = nlohmann::json::parse(orbits_report_json(prov, {rec}));
    CHECK(orb["orbits"].size() == 1);
    CHECK(orb["orbits"][0]["min_period_factor"] == 1);
}
