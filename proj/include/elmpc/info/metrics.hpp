#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "elmpc/info/triple_histogram.hpp"

namespace elmpc::info {

inline constexpr std::size_t kDefaultMinSamples = 100;

/// Entanglement metrics in bits.
///   psi       = I(S,A;S')  = H(S,A) + H(S') - H(S,A,S')
///   asymmetry = I(A;S') - I(S;A)
///   memory    = I(S;S')    = H(S) + H(S') - H(S,S')
struct EntanglementMetrics {
    double psi = 0.0;
    double asymmetry = 0.0;
    double memory = 0.0;

    double h_s = 0.0;
    double h_a = 0.0;
    double h_s_next = 0.0;
    double h_sa = 0.0;
    double h_a_s_next = 0.0;
    double h_s_s_next = 0.0;
    double h_joint = 0.0;

    std::size_t n = 0;

    friend bool operator==(const EntanglementMetrics&, const EntanglementMetrics&) = default;
};

/// Shannon entropy in bits of a count vector; zero counts contribute nothing.
/// Throws EmptyDistributionError when n == 0 and Error when counts do not sum to n.
double entropy(std::span<const std::uint32_t> counts, std::uint64_t n);

/// Fills the metrics from component entropies.
EntanglementMetrics metrics_from_entropies(double h_s, double h_a, double h_s_next, double h_sa,
                                           double h_a_s_next, double h_s_s_next, double h_joint,
                                           std::size_t n);

/// O(1): reads the incrementally maintained entropy accumulators.
/// Throws NotReadyError when fewer than min_samples triples are in the window.
EntanglementMetrics compute_metrics(const TripleHistogram& hist,
                                    std::size_t min_samples = kDefaultMinSamples);

/// Rebuilds every count table from the raw window and recomputes from scratch
/// with the direct -sum p log2 p formula. Verification oracle for compute_metrics.
EntanglementMetrics batch_recompute_oracle(const TripleHistogram& hist,
                                           std::size_t min_samples = kDefaultMinSamples);

/// Largest absolute difference over psi, asymmetry, memory and the component entropies.
double max_abs_difference(const EntanglementMetrics& x, const EntanglementMetrics& y);

}  // namespace elmpc::info
