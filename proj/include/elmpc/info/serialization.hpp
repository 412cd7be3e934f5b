#pragma once

#include <json.hpp>

#include "elmpc/info/discretization.hpp"
#include "elmpc/info/triple_histogram.hpp"

namespace elmpc::info {

nlohmann::json scheme_to_json(const DiscretizationScheme& scheme);
DiscretizationScheme scheme_from_json(const nlohmann::json& j);

/// Window length, both schemes and the window contents (oldest first).
/// Count tables are rebuilt on load by replaying the window.
nlohmann::json histogram_to_json(const TripleHistogram& hist, const DiscretizationScheme& state,
                                 const DiscretizationScheme& action);

struct LoadedHistogram {
    DiscretizationScheme state;
    DiscretizationScheme action;
    TripleHistogram histogram;
};

LoadedHistogram histogram_from_json(const nlohmann::json& j);

}  // namespace elmpc::info
