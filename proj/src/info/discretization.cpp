#include "elmpc/info/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "elmpc/error.hpp"

namespace elmpc::info {

DiscretizationScheme::DiscretizationScheme(std::vector<std::vector<double>> edges)
    : edges_(std::move(edges)) {
    if (edges_.empty()) {
        throw ConfigError("discretization scheme needs at least one dimension");
    }
    std::uint64_t card = 1;
    for (std::size_t d = 0; d < edges_.size(); ++d) {
        const auto& e = edges_[d];
        if (e.size() < 2) {
            throw ConfigError("dimension " + std::to_string(d) + " needs at least two edges");
        }
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (!std::isfinite(e[i])) {
                throw ConfigError("dimension " + std::to_string(d) + " has a non-finite edge");
            }
            if (i > 0 && !(e[i] > e[i - 1])) {
                throw ConfigError("edges of dimension " + std::to_string(d) +
                                  " are not strictly increasing");
            }
        }
        card *= e.size() + 1;
        if (card > std::numeric_limits<std::uint32_t>::max()) {
            throw ConfigError("discretization scheme cardinality exceeds 32 bits");
        }
    }
    cardinality_ = static_cast<std::uint32_t>(card);
}

std::vector<double> DiscretizationScheme::uniform_edges(double lo, double hi,
                                                        std::size_t interior_bins) {
    if (interior_bins == 0 || !(hi > lo)) {
        throw ConfigError("uniform edges need hi > lo and at least one interior bin");
    }
    std::vector<double> e(interior_bins + 1);
    const double width = (hi - lo) / static_cast<double>(interior_bins);
    for (std::size_t i = 0; i <= interior_bins; ++i) {
        e[i] = lo + width * static_cast<double>(i);
    }
    e.back() = hi;
    return e;
}

std::size_t DiscretizationScheme::bin_index(std::size_t dim, double value) const {
    const auto& e = edges_.at(dim);
    if (value == e.back()) {
        return e.size() - 1;
    }
    // Number of edges <= value: 0 is outer-low, e.size() is outer-high.
    return static_cast<std::size_t>(std::upper_bound(e.begin(), e.end(), value) - e.begin());
}

Symbol DiscretizationScheme::discretize(std::span<const double> features) const {
    if (features.size() != edges_.size()) {
        throw ConfigError("feature dimension " + std::to_string(features.size()) +
                          " does not match scheme dimension " + std::to_string(edges_.size()));
    }
    std::uint32_t index = 0;
    for (std::size_t d = 0; d < edges_.size(); ++d) {
        if (!std::isfinite(features[d])) {
            throw ConfigError("non-finite feature in dimension " + std::to_string(d));
        }
        index = index * static_cast<std::uint32_t>(bins(d)) +
                static_cast<std::uint32_t>(bin_index(d, features[d]));
    }
    return Symbol{index};
}

Symbol DiscretizationScheme::pack(std::span<const std::size_t> indices) const {
    if (indices.size() != edges_.size()) {
        throw ConfigError("index tuple dimension does not match scheme");
    }
    std::uint32_t index = 0;
    for (std::size_t d = 0; d < edges_.size(); ++d) {
        if (indices[d] >= bins(d)) {
            throw ConfigError("bin index out of range in dimension " + std::to_string(d));
        }
        index = index * static_cast<std::uint32_t>(bins(d)) + static_cast<std::uint32_t>(indices[d]);
    }
    return Symbol{index};
}

std::vector<std::size_t> DiscretizationScheme::unpack(Symbol symbol) const {
    if (symbol.index >= cardinality_) {
        throw ConfigError("symbol out of range for scheme");
    }
    std::vector<std::size_t> out(edges_.size());
    std::uint32_t rest = symbol.index;
    for (std::size_t d = edges_.size(); d-- > 0;) {
        const auto b = static_cast<std::uint32_t>(bins(d));
        out[d] = rest % b;
        rest /= b;
    }
    return out;
}

}  // namespace elmpc::info
