#include "elmpc/info/serialization.hpp"

#include "elmpc/error.hpp"

namespace elmpc::info {

using nlohmann::json;

json scheme_to_json(const DiscretizationScheme& scheme) {
    return json{{"edges", scheme.edges()}};
}

DiscretizationScheme scheme_from_json(const json& j) {
    try {
        return DiscretizationScheme(j.at("edges").get<std::vector<std::vector<double>>>());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad scheme document: ") + e.what());
    }
}

json histogram_to_json(const TripleHistogram& hist, const DiscretizationScheme& state,
                       const DiscretizationScheme& action) {
    if (state.cardinality() != hist.alphabet().state ||
        action.cardinality() != hist.alphabet().action) {
        throw ConfigError("schemes do not match histogram alphabet");
    }
    json rows = json::array();
    for (const auto& t : hist.contents()) {
        rows.push_back({t.s.index, t.a.index, t.s_next.index, t.cycle});
    }
    return json{{"window", hist.window()},
                {"state_scheme", scheme_to_json(state)},
                {"action_scheme", scheme_to_json(action)},
                {"triples", std::move(rows)}};
}

LoadedHistogram histogram_from_json(const json& j) {
    try {
        auto state = scheme_from_json(j.at("state_scheme"));
        auto action = scheme_from_json(j.at("action_scheme"));
        TripleHistogram hist(j.at("window").get<std::size_t>(),
                             Alphabet{state.cardinality(), action.cardinality()});
        for (const auto& row : j.at("triples")) {
            hist.push(SampleTriple{Symbol{row.at(0).get<std::uint32_t>()},
                                   Symbol{row.at(1).get<std::uint32_t>()},
                                   Symbol{row.at(2).get<std::uint32_t>()},
                                   row.at(3).get<std::int64_t>()});
        }
        return LoadedHistogram{std::move(state), std::move(action), std::move(hist)};
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad histogram document: ") + e.what());
    }
}

}  // namespace elmpc::info
