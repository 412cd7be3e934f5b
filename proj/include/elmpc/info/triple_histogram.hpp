#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "elmpc/info/discretization.hpp"

namespace elmpc::info {

/// One control cycle as seen by the monitor: optimizer input, applied action,
/// and the optimizer input of the following cycle.
struct SampleTriple {
    Symbol s;
    Symbol a;
    Symbol s_next;
    std::int64_t cycle = 0;

    friend bool operator==(const SampleTriple&, const SampleTriple&) = default;
};

/// Which projection of the (s, a, s') joint a count table holds.
enum class Projection : std::size_t { S, A, SNext, SA, ASNext, SSNext, Joint };

inline constexpr std::size_t kProjectionCount = 7;

/// Sparse count table that also tracks sum(c * log2 c) over its entries in
/// 32.32 fixed point, so entropy is O(1) and the accumulator depends only on
/// the multiset of counts (never on the order of updates).
class CountTable {
public:
    using Map = std::unordered_map<std::uint64_t, std::uint32_t>;

    void increment(std::uint64_t key);
    void decrement(std::uint64_t key);
    std::uint32_t count(std::uint64_t key) const;

    std::size_t occupied() const noexcept { return counts_.size(); }
    const Map& entries() const noexcept { return counts_; }

    /// Plug-in entropy in bits given the table's total n.
    double entropy(std::uint64_t n) const;

    std::int64_t clogc_fixed() const noexcept { return clogc_; }

    static std::int64_t clogc_term(std::uint32_t c);

private:
    Map counts_;
    std::int64_t clogc_ = 0;
};

struct Alphabet {
    std::uint32_t state = 0;   // cardinality of s and s'
    std::uint32_t action = 0;  // cardinality of a
};

/// Sliding-window joint counts over (s, a, s') and all marginals needed for
/// the entanglement metrics. Single writer.
class TripleHistogram {
public:
    TripleHistogram(std::size_t window, Alphabet alphabet);

    /// Adds t; evicts the oldest triple first when the window is full.
    /// Touches a constant number of table entries.
    void push(const SampleTriple& t);

    std::size_t size() const noexcept { return n_; }
    std::size_t window() const noexcept { return ring_.size(); }
    bool full() const noexcept { return n_ == ring_.size(); }
    const Alphabet& alphabet() const noexcept { return alphabet_; }

    const CountTable& table(Projection p) const { return tables_[static_cast<std::size_t>(p)]; }
    std::uint32_t count(Projection p, const SampleTriple& t) const;

    /// Window contents, oldest first.
    std::vector<SampleTriple> contents() const;

    /// Key of t under a projection; shared with the batch oracle.
    std::uint64_t key(Projection p, const SampleTriple& t) const;

    std::size_t occupied_entries() const noexcept;
    /// Bytes of key/count payload held by occupied table entries.
    std::size_t occupied_table_bytes() const noexcept;
    /// Ring buffer payload in bytes.
    std::size_t window_bytes() const noexcept { return ring_.size() * sizeof(SampleTriple); }

private:
    void check(const SampleTriple& t) const;

    Alphabet alphabet_;
    std::vector<SampleTriple> ring_;
    std::size_t head_ = 0;  // next slot to write
    std::size_t n_ = 0;
    std::array<CountTable, kProjectionCount> tables_;
};

}  // namespace elmpc::info
