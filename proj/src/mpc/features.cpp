#include "elmpc/mpc/features.hpp"

namespace elmpc::mpc {

StateFeatures state_features(const UavState& estimate, const ReferencePoint& ref_now,
                             double predicted_terminal_cost) {
    return StateFeatures{(estimate.position - ref_now.position).norm(),
                         (estimate.velocity - ref_now.velocity).norm(), predicted_terminal_cost};
}

ActionFeatures action_features(const ControlInput& applied) {
    return ActionFeatures{applied.accel.x(), applied.accel.y()};
}

OptimizerIo extract_io(const UavState& estimate, const ReferencePoint& ref_now,
                       const ControlInput& applied, const OptimizerDiagnostics& diagnostics) {
    OptimizerIo io;
    io.input = state_features(estimate, ref_now, diagnostics.warm_terminal_cost);
    io.action = action_features(applied);
    io.diagnostics = diagnostics;
    return io;
}

RawTriple make_triple(const OptimizerIo& current, const StateFeatures& next_input,
                      std::int64_t cycle) {
    return RawTriple{current.input, current.action, next_input, cycle};
}

}  // namespace elmpc::mpc
