#include "elmpc/info/triple_histogram.hpp"

#include <cmath>
#include <string>

#include "elmpc/error.hpp"

namespace elmpc::info {

namespace {

constexpr double kFixedScale = 4294967296.0;  // 2^32

}  // namespace

std::int64_t CountTable::clogc_term(std::uint32_t c) {
    if (c < 2) {
        return 0;
    }
    const double v = static_cast<double>(c);
    return std::llround(v * std::log2(v) * kFixedScale);
}

void CountTable::increment(std::uint64_t key) {
    auto& c = counts_[key];
    clogc_ += clogc_term(c + 1) - clogc_term(c);
    ++c;
}

void CountTable::decrement(std::uint64_t key) {
    auto it = counts_.find(key);
    if (it == counts_.end() || it->second == 0) {
        throw Error("count table underflow");
    }
    const std::uint32_t c = it->second;
    clogc_ += clogc_term(c - 1) - clogc_term(c);
    if (c == 1) {
        counts_.erase(it);
    } else {
        it->second = c - 1;
    }
}

std::uint32_t CountTable::count(std::uint64_t key) const {
    auto it = counts_.find(key);
    return it == counts_.end() ? 0 : it->second;
}

double CountTable::entropy(std::uint64_t n) const {
    if (n == 0) {
        throw EmptyDistributionError("entropy of an empty distribution");
    }
    // H = log2 n - (1/n) * sum c log2 c
    const double nd = static_cast<double>(n);
    const double h = std::log2(nd) - static_cast<double>(clogc_) / (kFixedScale * nd);
    return h < 0.0 ? 0.0 : h;
}

TripleHistogram::TripleHistogram(std::size_t window, Alphabet alphabet)
    : alphabet_(alphabet), ring_(window) {
    if (window == 0) {
        throw ConfigError("histogram window must be positive");
    }
    if (alphabet.state == 0 || alphabet.action == 0) {
        throw ConfigError("histogram alphabet sizes must be positive");
    }
}

std::uint64_t TripleHistogram::key(Projection p, const SampleTriple& t) const {
    const std::uint64_t s = t.s.index;
    const std::uint64_t a = t.a.index;
    const std::uint64_t sn = t.s_next.index;
    const std::uint64_t ns = alphabet_.state;
    const std::uint64_t na = alphabet_.action;
    switch (p) {
        case Projection::S: return s;
        case Projection::A: return a;
        case Projection::SNext: return sn;
        case Projection::SA: return s * na + a;
        case Projection::ASNext: return a * ns + sn;
        case Projection::SSNext: return s * ns + sn;
        case Projection::Joint: return (s * na + a) * ns + sn;
    }
    return 0;
}

void TripleHistogram::check(const SampleTriple& t) const {
    if (t.s.index >= alphabet_.state || t.s_next.index >= alphabet_.state ||
        t.a.index >= alphabet_.action) {
        throw ConfigError("symbol out of range at cycle " + std::to_string(t.cycle));
    }
}

void TripleHistogram::push(const SampleTriple& t) {
    check(t);
    if (full()) {
        const SampleTriple& old = ring_[head_];
        for (std::size_t p = 0; p < kProjectionCount; ++p) {
            tables_[p].decrement(key(static_cast<Projection>(p), old));
        }
    } else {
        ++n_;
    }
    ring_[head_] = t;
    head_ = (head_ + 1) % ring_.size();
    for (std::size_t p = 0; p < kProjectionCount; ++p) {
        tables_[p].increment(key(static_cast<Projection>(p), t));
    }
}

std::uint32_t TripleHistogram::count(Projection p, const SampleTriple& t) const {
    return table(p).count(key(p, t));
}

std::vector<SampleTriple> TripleHistogram::contents() const {
    std::vector<SampleTriple> out;
    out.reserve(n_);
    const std::size_t start = full() ? head_ : 0;
    for (std::size_t i = 0; i < n_; ++i) {
        out.push_back(ring_[(start + i) % ring_.size()]);
    }
    return out;
}

std::size_t TripleHistogram::occupied_entries() const noexcept {
    std::size_t total = 0;
    for (const auto& t : tables_) {
        total += t.occupied();
    }
    return total;
}

std::size_t TripleHistogram::occupied_table_bytes() const noexcept {
    return occupied_entries() * (sizeof(std::uint64_t) + sizeof(std::uint32_t));
}

}  // namespace elmpc::info
