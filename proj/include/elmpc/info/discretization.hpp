#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace elmpc::info {

/// Composite bin index of a feature vector, row-major over dimensions
/// (first dimension most significant).
struct Symbol {
    std::uint32_t index = 0;

    constexpr Symbol() = default;
    constexpr explicit Symbol(std::uint32_t i) : index(i) {}
    friend constexpr auto operator<=>(Symbol, Symbol) = default;
};

/// Per-dimension bin edges. A dimension with m strictly increasing edges has
/// m - 1 interior bins plus an outer-low bin (index 0) and an outer-high bin
/// (index m). Intervals are left-closed, right-open; a value equal to the
/// last edge belongs to the last interior bin.
class DiscretizationScheme {
public:
    DiscretizationScheme() = default;
    explicit DiscretizationScheme(std::vector<std::vector<double>> edges);

    /// Uniform interior bins over [lo, hi] for one dimension.
    static std::vector<double> uniform_edges(double lo, double hi, std::size_t interior_bins);

    std::size_t dimensions() const noexcept { return edges_.size(); }
    std::size_t bins(std::size_t dim) const { return edges_.at(dim).size() + 1; }
    /// Product of per-dimension bin counts; every Symbol is below this.
    std::uint32_t cardinality() const noexcept { return cardinality_; }
    const std::vector<std::vector<double>>& edges() const noexcept { return edges_; }

    std::size_t bin_index(std::size_t dim, double value) const;

    /// Throws ConfigError on dimension mismatch or non-finite input.
    Symbol discretize(std::span<const double> features) const;

    Symbol pack(std::span<const std::size_t> indices) const;
    std::vector<std::size_t> unpack(Symbol symbol) const;

    friend bool operator==(const DiscretizationScheme&, const DiscretizationScheme&) = default;

private:
    std::vector<std::vector<double>> edges_;
    std::uint32_t cardinality_ = 0;
};

}  // namespace elmpc::info
