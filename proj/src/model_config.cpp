#include "duffing/model_config.hpp"

#include <fstream>

#include <json.hpp>

#include "duffing/errors.hpp"
#include "duffing/types.hpp"

namespace duffing {

using nlohmann::ordered_json;

ImpulsiveSystem ModelConfig::build() const {
    ImpulsiveSystem sys;
    switch (kind) {
        case GField::Kind::linear:
            sys.g = make_linear();
            break;
        case GField::Kind::semilinear:
            sys.g = make_semilinear(lambda_lo, lambda_hi, growth, smoothing);
            break;
        default:
            throw ConfigError("model config: unsupported g kind");
    }
    sys.forcing = forcing;
    if (t1 < 0.0 || t1 >= kTwoPi)
        throw ConfigError("model config: impulse t1 must lie in [0, 2*pi)");
    sys.impulse.t1 = t1;
    sys.impulse.enabled = impulse_enabled;
    return sys;
}

std::string ModelConfig::to_json() const {
    ordered_json j;
    if (kind == GField::Kind::linear) {
        j["g"] = {{"kind", "linear"}};
    } else {
        j["g"] = {{"kind", "semilinear"},
                  {"lambda_lo", lambda_lo},
                  {"lambda_hi", lambda_hi},
                  {"growth", growth},
                  {"smoothing", smoothing}};
    }
    j["forcing"] = {{"constant", forcing.constant},
                    {"cos", forcing.cos_coeffs},
                    {"sin", forcing.sin_coeffs}};
    j["impulse"] = {{"t1", t1}};
    if (!impulse_enabled) j["impulse"]["enabled"] = false;
    return j.dump();
}

ModelConfig ModelConfig::from_json_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("model config: invalid JSON: ") + e.what());
    }

    ModelConfig cfg;
    if (!j.contains("g") || !j["g"].contains("kind"))
        throw ConfigError("model config: missing g.kind");
    const std::string kind = j["g"]["kind"].get<std::string>();
    if (kind == "linear") {
        cfg.kind = GField::Kind::linear;
    } else if (kind == "semilinear") {
        cfg.kind = GField::Kind::semilinear;
        const auto& g = j["g"];
        if (!g.contains("lambda_lo") || !g.contains("lambda_hi"))
            throw ConfigError("model config: semilinear g needs lambda_lo and lambda_hi");
        cfg.lambda_lo = g["lambda_lo"].get<double>();
        cfg.lambda_hi = g["lambda_hi"].get<double>();
        if (g.contains("growth")) cfg.growth = g["growth"].get<double>();
        if (g.contains("smoothing")) cfg.smoothing = g["smoothing"].get<double>();
    } else {
        throw ConfigError("model config: unknown g.kind '" + kind + "'");
    }

    if (j.contains("forcing")) {
        const auto& f = j["forcing"];
        if (f.contains("constant")) cfg.forcing.constant = f["constant"].get<double>();
        if (f.contains("cos")) cfg.forcing.cos_coeffs = f["cos"].get<std::vector<double>>();
        if (f.contains("sin")) cfg.forcing.sin_coeffs = f["sin"].get<std::vector<double>>();
    }

    if (!j.contains("impulse") || !j["impulse"].contains("t1"))
        throw ConfigError("model config: missing impulse.t1");
    cfg.t1 = j["impulse"]["t1"].get<double>();
    if (j["impulse"].contains("enabled")) cfg.impulse_enabled = j["impulse"]["enabled"].get<bool>();
    return cfg;
}

ModelConfig ModelConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("model config: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text);
}

}  // namespace duffing
