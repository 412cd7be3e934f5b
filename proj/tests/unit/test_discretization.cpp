#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "elmpc/error.hpp"
#include "elmpc/info/discretization.hpp"

using elmpc::ConfigError;
using elmpc::info::DiscretizationScheme;
using elmpc::info::Symbol;

TEST_CASE("one-dimensional scheme maps values to bins") {
    DiscretizationScheme scheme({{0.0, 1.0, 2.0, 3.0}});
    CHECK(scheme.bins(0) == 5);
    CHECK(scheme.cardinality() == 5);

    const double v = 1.5;
    CHECK(scheme.discretize(std::vector{v}) == Symbol{2});
    CHECK(scheme.discretize(std::vector{-7.0}) == Symbol{0});

    SUBCASE("edges are left-closed") {
        CHECK(scheme.discretize(std::vector{0.0}) == Symbol{1});
        CHECK(scheme.discretize(std::vector{1.0}) == Symbol{2});
        CHECK(scheme.discretize(std::vector{2.0}) == Symbol{3});
    }
    SUBCASE("top edge belongs to the last interior bin") {
        CHECK(scheme.discretize(std::vector{3.0}) == Symbol{3});
        CHECK(scheme.discretize(std::vector{std::nextafter(3.0, 4.0)}) == Symbol{4});
        CHECK(scheme.discretize(std::vector{1e300}) == Symbol{4});
    }
}

TEST_CASE("two-dimensional scheme packs row-major") {
    // 4 edges -> 5 bins per dimension
    DiscretizationScheme scheme({{0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, 2.0, 3.0}});
    CHECK(scheme.cardinality() == 25);
    const std::vector<std::size_t> idx{2, 3};
    CHECK(scheme.pack(idx) == Symbol{13});
    CHECK(scheme.discretize(std::vector{1.5, 2.5}) == Symbol{13});
    CHECK(scheme.unpack(Symbol{13}) == idx);
}

TEST_CASE("discretize rejects bad input") {
    DiscretizationScheme scheme({{0.0, 1.0}, {0.0, 1.0}});
    CHECK_THROWS_AS(scheme.discretize(std::vector{0.5}), ConfigError);
    CHECK_THROWS_AS(scheme.discretize(std::vector{0.5, std::nan("")}), ConfigError);
    CHECK_THROWS_AS(scheme.discretize(std::vector{std::numeric_limits<double>::infinity(), 0.0}),
                    ConfigError);
}

TEST_CASE("scheme construction validates edges") {
    CHECK_THROWS_AS(DiscretizationScheme({{0.0, 0.0, 1.0}}), ConfigError);
    CHECK_THROWS_AS(DiscretizationScheme({{1.0, 0.0}}), ConfigError);
    CHECK_THROWS_AS(DiscretizationScheme(std::vector<std::vector<double>>{{0.5}}), ConfigError);
    CHECK_THROWS_AS(DiscretizationScheme(std::vector<std::vector<double>>{}), ConfigError);
    CHECK_THROWS_AS(DiscretizationScheme::uniform_edges(1.0, 1.0, 3), ConfigError);
}

TEST_CASE("uniform edges span the operational range") {
    const auto e = DiscretizationScheme::uniform_edges(-2.0, 2.0, 4);
    REQUIRE(e.size() == 5);
    CHECK(e.front() == -2.0);
    CHECK(e[2] == doctest::Approx(0.0));
    CHECK(e.back() == 2.0);
}

TEST_CASE("property: every value lands in exactly one bin and packing is bijective") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> val(-10.0, 10.0);
    DiscretizationScheme scheme({DiscretizationScheme::uniform_edges(-3.0, 3.0, 6),
                                 {0.0, 0.5, 4.0},
                                 DiscretizationScheme::uniform_edges(-1.0, 1.0, 2)});
    for (int i = 0; i < 2000; ++i) {
        std::vector<double> f{val(rng), val(rng), val(rng)};
        const Symbol s = scheme.discretize(f);
        REQUIRE(s.index < scheme.cardinality());
        const auto idx = scheme.unpack(s);
        for (std::size_t d = 0; d < 3; ++d) {
            REQUIRE(idx[d] == scheme.bin_index(d, f[d]));
        }
        REQUIRE(scheme.pack(idx) == s);
    }
    for (std::uint32_t k = 0; k < scheme.cardinality(); ++k) {
        REQUIRE(scheme.pack(scheme.unpack(Symbol{k})) == Symbol{k});
    }
}
