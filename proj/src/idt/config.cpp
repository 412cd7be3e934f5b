#include "elmpc/idt/config.hpp"

#include <cmath>
#include <string>

#include "elmpc/error.hpp"

namespace elmpc::idt {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw ConfigError("invalid idt config: " + what);
    }
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void IdtConfig::validate() const {
    require(positive(alpha) && positive(beta) && positive(gamma) && positive(delta) &&
                positive(epsilon),
            "sensitivities must be positive");
    require(positive(k), "k must be positive");
    require(std::isfinite(std_floor) && std_floor >= 0.0, "std_floor must be >= 0");
    require(gradient_window >= 2, "gradient_window must be >= 2");
    require(cooldown >= 1, "cooldown must be >= 1");
    require(window >= 1, "window must be >= 1");
    require(min_samples >= 1 && min_samples <= window, "min_samples must be in [1, window]");
    require(calibration_length >= 1, "calibration_length must be >= 1");
}

FeatureSchemes FeatureSchemes::defaults() {
    using info::DiscretizationScheme;
    // Interior bins cover the nominal operating envelope; the outer bins
    // absorb degraded operation.
    DiscretizationScheme state({
        DiscretizationScheme::uniform_edges(0.004, 0.012, 2),  // position error, m
        DiscretizationScheme::uniform_edges(0.02, 0.06, 2),    // velocity error, m/s
        DiscretizationScheme::uniform_edges(2e-5, 1e-4, 1),    // predicted terminal cost
    });
    const auto accel = DiscretizationScheme::uniform_edges(-1.5, 1.5, 5);  // m/s^2
    DiscretizationScheme action({accel, accel});
    return FeatureSchemes{std::move(state), std::move(action)};
}

}  // namespace elmpc::idt
