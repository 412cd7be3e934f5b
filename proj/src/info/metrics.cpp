#include "elmpc/info/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "elmpc/error.hpp"

namespace elmpc::info {

double entropy(std::span<const std::uint32_t> counts, std::uint64_t n) {
    if (n == 0) {
        throw EmptyDistributionError("entropy of an empty distribution");
    }
    std::uint64_t total = 0;
    double h = 0.0;
    const double nd = static_cast<double>(n);
    for (const std::uint32_t c : counts) {
        total += c;
        if (c == 0) {
            continue;
        }
        const double p = static_cast<double>(c) / nd;
        h -= p * std::log2(p);
    }
    if (total != n) {
        throw Error("counts sum to " + std::to_string(total) + ", expected " + std::to_string(n));
    }
    return h;
}

EntanglementMetrics metrics_from_entropies(double h_s, double h_a, double h_s_next, double h_sa,
                                           double h_a_s_next, double h_s_s_next, double h_joint,
                                           std::size_t n) {
    EntanglementMetrics m;
    m.h_s = h_s;
    m.h_a = h_a;
    m.h_s_next = h_s_next;
    m.h_sa = h_sa;
    m.h_a_s_next = h_a_s_next;
    m.h_s_s_next = h_s_s_next;
    m.h_joint = h_joint;
    m.n = n;

    m.psi = h_sa + h_s_next - h_joint;
    const double mi_a_snext = h_a + h_s_next - h_a_s_next;
    const double mi_s_a = h_s + h_a - h_sa;
    m.asymmetry = mi_a_snext - mi_s_a;
    m.memory = h_s + h_s_next - h_s_s_next;
    return m;
}

namespace {

void require_ready(const TripleHistogram& hist, std::size_t min_samples) {
    const std::size_t gate = std::max<std::size_t>(min_samples, 1);
    if (hist.size() < gate) {
        throw NotReadyError("metrics need " + std::to_string(gate) + " samples, window holds " +
                            std::to_string(hist.size()));
    }
}

}  // namespace

EntanglementMetrics compute_metrics(const TripleHistogram& hist, std::size_t min_samples) {
    require_ready(hist, min_samples);
    const std::uint64_t n = hist.size();
    auto h = [&](Projection p) { return hist.table(p).entropy(n); };
    return metrics_from_entropies(h(Projection::S), h(Projection::A), h(Projection::SNext),
                                  h(Projection::SA), h(Projection::ASNext), h(Projection::SSNext),
                                  h(Projection::Joint), hist.size());
}

EntanglementMetrics batch_recompute_oracle(const TripleHistogram& hist, std::size_t min_samples) {
    require_ready(hist, min_samples);
    const auto window = hist.contents();
    const std::uint64_t n = window.size();

    std::array<double, kProjectionCount> h{};
    for (std::size_t p = 0; p < kProjectionCount; ++p) {
        const auto proj = static_cast<Projection>(p);
        std::map<std::uint64_t, std::uint32_t> table;
        for (const auto& t : window) {
            ++table[hist.key(proj, t)];
        }
        std::vector<std::uint32_t> counts;
        counts.reserve(table.size());
        for (const auto& [k, c] : table) {
            counts.push_back(c);
        }
        h[p] = entropy(counts, n);
    }
    using P = Projection;
    auto at = [&](P p) { return h[static_cast<std::size_t>(p)]; };
    return metrics_from_entropies(at(P::S), at(P::A), at(P::SNext), at(P::SA), at(P::ASNext),
                                  at(P::SSNext), at(P::Joint), window.size());
}

double max_abs_difference(const EntanglementMetrics& x, const EntanglementMetrics& y) {
    const double diffs[] = {
        std::abs(x.psi - y.psi),           std::abs(x.asymmetry - y.asymmetry),
        std::abs(x.memory - y.memory),     std::abs(x.h_s - y.h_s),
        std::abs(x.h_a - y.h_a),           std::abs(x.h_s_next - y.h_s_next),
        std::abs(x.h_sa - y.h_sa),         std::abs(x.h_a_s_next - y.h_a_s_next),
        std::abs(x.h_s_s_next - y.h_s_s_next), std::abs(x.h_joint - y.h_joint),
    };
    return *std::max_element(std::begin(diffs), std::end(diffs));
}

}  // namespace elmpc::info
