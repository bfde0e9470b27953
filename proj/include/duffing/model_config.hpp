// JSON model configuration: restoring force, forcing and impulse schedule.
#pragma once

#include <string>

#include "duffing/models.hpp"

namespace duffing {

struct ModelConfig {
    // g
    GField::Kind kind{GField::Kind::linear};
    double lambda_lo{1.0};
    double lambda_hi{3.0};
    double growth{4.0};
    double smoothing{0.05};
    // forcing
    Forcing forcing;
    // impulse
    double t1{0.0};
    bool impulse_enabled{true};

    ImpulsiveSystem build() const;

    // Compact canonical JSON (used verbatim in output provenance headers).
    std::string to_json() const;

    static ModelConfig from_json_text(const std::string& text);
    static ModelConfig from_file(const std::string& path);
};

}  // namespace duffing
