#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "elmpc/error.hpp"
#include "elmpc/info/metrics.hpp"
#include "fuzz.hpp"

using namespace elmpc::info;

namespace {

SampleTriple tri(std::uint32_t s, std::uint32_t a, std::uint32_t sn) {
    return SampleTriple{Symbol{s}, Symbol{a}, Symbol{sn}, 0};
}

// s' = (s + a) mod 4 over every (s, a) pair, each pair `reps` times.
TripleHistogram deterministic_map(std::size_t reps) {
    TripleHistogram hist(16 * reps, Alphabet{4, 4});
    for (std::size_t r = 0; r < reps; ++r) {
        for (std::uint32_t s = 0; s < 4; ++s) {
            for (std::uint32_t a = 0; a < 4; ++a) {
                hist.push(tri(s, a, (s + a) % 4));
            }
        }
    }
    return hist;
}

}  // namespace

TEST_CASE("entropy of simple count vectors") {
    const std::vector<std::uint32_t> uniform{1, 1, 1, 1};
    CHECK(entropy(uniform, 4) == doctest::Approx(2.0).epsilon(1e-15));
    const std::vector<std::uint32_t> point{4};
    CHECK(entropy(point, 4) == 0.0);
    const std::vector<std::uint32_t> skew{3, 1};
    CHECK(std::abs(entropy(skew, 4) - 0.811278) < 1e-6);
    const std::vector<std::uint32_t> with_zero{3, 0, 1};
    CHECK(entropy(with_zero, 4) == entropy(skew, 4));
}

TEST_CASE("entropy rejects empty or inconsistent counts") {
    const std::vector<std::uint32_t> none;
    CHECK_THROWS_AS(entropy(none, 0), elmpc::EmptyDistributionError);
    const std::vector<std::uint32_t> c{1, 2};
    CHECK_THROWS_AS(entropy(c, 4), elmpc::Error);
}

TEST_CASE("deterministic map gives psi equal to H(S')") {
    const auto hist = deterministic_map(1);
    const auto m = compute_metrics(hist, 16);
    CHECK(std::abs(m.psi - 2.0) < 1e-9);
    CHECK(std::abs(m.h_s_next - 2.0) < 1e-9);
    CHECK(std::abs(m.h_joint - 4.0) < 1e-9);
    // Uniform independent (s, a): no s-a dependence, so asymmetry = I(A;S') = 0 here too.
    CHECK(std::abs(m.asymmetry) < 1e-9);
    CHECK(std::abs(m.memory) < 1e-9);
}

TEST_CASE("independent uniform triples have small psi") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        TripleHistogram hist(5000, Alphabet{8, 8});
        for (const auto& t : elmpc::testing::random_triples(seed, 5000, Alphabet{8, 8})) {
            hist.push(t);
        }
        const auto m = compute_metrics(hist);
        CHECK(m.psi <= 0.15);
        CHECK(m.psi >= 0.0);
    }
}

TEST_CASE("identity transition: memory equals H(S) and psi equals memory") {
    TripleHistogram hist(64, Alphabet{8, 4});
    std::mt19937_64 rng(1);
    for (std::uint32_t s = 0; s < 8; ++s) {
        for (std::uint32_t a = 0; a < 4; ++a) {
            for (int r = 0; r < 2; ++r) {
                hist.push(tri(s, a, s));
            }
        }
    }
    const auto m = compute_metrics(hist, 64);
    CHECK(std::abs(m.memory - m.h_s) < 1e-9);
    CHECK(std::abs(m.psi - m.memory) < 1e-9);
    CHECK(std::abs(m.h_s - 3.0) < 1e-9);
}

TEST_CASE("metrics are gated on the minimum sample count") {
    TripleHistogram hist(500, Alphabet{4, 4});
    CHECK_THROWS_AS(compute_metrics(hist), elmpc::NotReadyError);
    CHECK_THROWS_AS(batch_recompute_oracle(hist), elmpc::NotReadyError);
    for (int i = 0; i < 99; ++i) hist.push(tri(1, 1, 1));
    CHECK_THROWS_AS(compute_metrics(hist), elmpc::NotReadyError);
    hist.push(tri(1, 1, 1));
    CHECK_NOTHROW(compute_metrics(hist));
}

TEST_CASE("constant triple has zero entropies") {
    TripleHistogram hist(200, Alphabet{4, 4});
    for (int i = 0; i < 200; ++i) hist.push(tri(2, 3, 1));
    for (const auto& m : {compute_metrics(hist), batch_recompute_oracle(hist)}) {
        CHECK(m.psi == 0.0);
        CHECK(m.memory == 0.0);
        CHECK(m.h_joint == 0.0);
    }
}

TEST_CASE("incremental metrics match the batch oracle") {
    const Alphabet alpha{48, 49};
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        TripleHistogram hist(1000, alpha);
        const auto triples = elmpc::testing::random_triples(seed, 10000, alpha, seed % 2 == 0);
        for (std::size_t i = 0; i < triples.size(); ++i) {
            hist.push(triples[i]);
            if ((i + 1) % 250 == 0) {
                REQUIRE(max_abs_difference(compute_metrics(hist), batch_recompute_oracle(hist)) <=
                        1e-9);
            }
        }
    }
}

TEST_CASE("property: information identities on fuzzed histograms") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Alphabet alpha{2 + static_cast<std::uint32_t>(seed % 11),
                             2 + static_cast<std::uint32_t>(seed % 5)};
        const std::size_t window = 20 + seed * 3;
        TripleHistogram hist(window, alpha);
        for (const auto& t : elmpc::testing::random_triples(seed, window + seed, alpha, seed % 3 == 0)) {
            hist.push(t);
        }
        const auto m = compute_metrics(hist, 1);
        REQUIRE(m.psi >= -1e-9);
        REQUIRE(m.memory >= -1e-9);
        REQUIRE(m.psi >= m.memory - 1e-9);
        REQUIRE(m.psi <= std::min(m.h_sa, m.h_s_next) + 1e-9);
        REQUIRE(m.asymmetry >= -std::min(m.h_s, m.h_a) - 1e-9);
        REQUIRE(m.asymmetry <= std::min(m.h_a, m.h_s_next) + 1e-9);
    }
}

TEST_CASE("property: shuffling s' destroys dependence") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::uint32_t> d(0, 3);
        std::vector<SampleTriple> data;
        for (int i = 0; i < 5000; ++i) {
            const auto s = d(rng);
            const auto a = d(rng);
            data.push_back(tri(s, a, (s + a) % 4));
        }
        std::vector<Symbol> column;
        for (const auto& t : data) column.push_back(t.s_next);
        std::shuffle(column.begin(), column.end(), rng);

        TripleHistogram original(5000, Alphabet{4, 4});
        TripleHistogram shuffled(5000, Alphabet{4, 4});
        for (std::size_t i = 0; i < data.size(); ++i) {
            original.push(data[i]);
            auto t = data[i];
            t.s_next = column[i];
            shuffled.push(t);
        }
        CHECK(compute_metrics(shuffled).psi < compute_metrics(original).psi);
    }
}
