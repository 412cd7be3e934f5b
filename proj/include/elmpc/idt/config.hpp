#pragma once

#include <cstddef>

#include "elmpc/info/discretization.hpp"

namespace elmpc::idt {

struct IdtConfig {
    // Adaptation sensitivities.
    double alpha = 0.5;    // input-bound relaxation
    double beta = 1.0;     // horizon shortening
    double gamma = 0.5;    // drag-model update
    double delta = 1.0;    // sampling-time reduction
    double epsilon = 1.0;  // process-noise inflation

    double k = 2.0;                       // threshold multiplier on baseline std
    double std_floor = 0.0;               // lower bound on the std used for thresholds, bits
    std::size_t gradient_window = 50;     // cycles in the least-squares slope
    std::size_t calibration_length = 200; // minimum metric samples for a baseline
    std::size_t cooldown = 100;           // cycles between two feedback outputs

    std::size_t window = 1000;      // sliding window W
    std::size_t min_samples = 100;  // metrics gate n_min

    /// Throws ConfigError when an invariant is violated.
    void validate() const;
};

/// Discretization of optimizer inputs (S, S') and actions (A).
struct FeatureSchemes {
    info::DiscretizationScheme state;
    info::DiscretizationScheme action;

    /// 4 x 4 x 3 = 48 state symbols, 7 x 7 = 49 action symbols.
    static FeatureSchemes defaults();
};

}  // namespace elmpc::idt
