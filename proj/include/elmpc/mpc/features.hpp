#pragma once

#include <array>

#include "elmpc/mpc/optimizer.hpp"
#include "elmpc/mpc/trajectory.hpp"
#include "elmpc/mpc/types.hpp"

namespace elmpc::mpc {

using StateFeatures = std::array<double, 3>;   // |p err|, |v err|, predicted terminal cost
using ActionFeatures = std::array<double, 2>;  // applied ax, ay

/// What the monitor sees of one optimizer call.
struct OptimizerIo {
    StateFeatures input{};
    ActionFeatures action{};
    OptimizerDiagnostics diagnostics;
};

/// Raw features of one (S, A, S') triple before discretization.
struct RawTriple {
    StateFeatures s{};
    ActionFeatures a{};
    StateFeatures s_next{};
    std::int64_t cycle = 0;
};

/// Optimizer-input features from the estimate, the current reference sample
/// and the terminal cost the optimizer was handed (warm-start prediction).
StateFeatures state_features(const UavState& estimate, const ReferencePoint& ref_now,
                             double predicted_terminal_cost);

ActionFeatures action_features(const ControlInput& applied);

OptimizerIo extract_io(const UavState& estimate, const ReferencePoint& ref_now,
                       const ControlInput& applied, const OptimizerDiagnostics& diagnostics);

/// Pairs cycle k's features with cycle k+1's optimizer input.
RawTriple make_triple(const OptimizerIo& current, const StateFeatures& next_input,
                      std::int64_t cycle);

}  // namespace elmpc::mpc
