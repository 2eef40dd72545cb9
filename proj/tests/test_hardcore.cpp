#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "scatlen/gibbs.hpp"
#include "scatlen/hardcore.hpp"

using namespace scatlen;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("three-dimensional closed form") {
    REQUIRE_THAT(ebeta_hardcore({1.0, Beta{1.0}, Dim::three}),
                 WithinRel(8.0 * pi * 7.0 / 3.0, 1e-15));
    // exact at rational inputs
    REQUIRE_THAT(ebeta_hardcore({2.0, Beta{4.0}, Dim::three}),
                 WithinRel(16.0 * pi * (1.0 + 1.0 + 1.0 / 3.0), 1e-15));
    // large-beta limit is 8 pi a
    REQUIRE_THAT(ebeta_hardcore({1.0, Beta{1e12}, Dim::three}), WithinRel(8.0 * pi, 1e-5));
}

TEST_CASE("two-dimensional closed form against the small-argument asymptote") {
    // t = a/sqrt(beta) = 0.01: -t K0'(t)/K0(t) ~ 1/(ln(2/t) - gamma)
    const double beta = 1e4;
    const double got = ebeta_hardcore({1.0, Beta{beta}, Dim::two});
    const double asym = 4.0 * pi / (std::log(200.0) - euler_gamma) + 2.0 * pi * 1e-4;
    REQUIRE_THAT(got, WithinRel(asym, 0.02));
}

TEST_CASE("minimizer profile values") {
    const HardCoreParams p3{1.0, Beta{1.0}, Dim::three};
    REQUIRE(hardcore_profile(p3, 0.5) == 1.0);
    REQUIRE(hardcore_profile(p3, 1.0) == 1.0);
    REQUIRE_THAT(hardcore_profile(p3, 2.0), WithinRel(0.5 * std::exp(-1.0), 1e-14));

    const HardCoreParams p2{1.0, Beta{1.0}, Dim::two};
    REQUIRE(hardcore_profile(p2, 1.0) == 1.0);
    REQUIRE_THAT(hardcore_profile(p2, 2.0), WithinRel(bessel_k0(2.0) / bessel_k0(1.0), 1e-14));
}

TEST_CASE("theorem 1 dominates the closed form, tight at large beta") {
    for (double beta : {0.01, 0.1, 1.0, 10.0, 100.0, 1e4, 1e6}) {
        const double exact = ebeta_hardcore({1.0, Beta{beta}, Dim::three});
        const double bound = theorem1_bound(1.0, Beta{beta}, Dim::three);
        const double expected_ratio =
            std::pow(1.0 + 1.0 / std::sqrt(3.0 * beta), 2) /
            (1.0 + 1.0 / std::sqrt(beta) + 1.0 / (3.0 * beta));
        REQUIRE(bound >= exact);
        REQUIRE(bound / exact <= expected_ratio * 1.0001);
    }
    const double ratio = theorem1_bound(1.0, Beta{1e4}, Dim::three) /
                         ebeta_hardcore({1.0, Beta{1e4}, Dim::three});
    REQUIRE(ratio <= 1.002);
}

TEST_CASE("two-dimensional leading order") {
    // e(beta) * ln(beta/a^2) / (8 pi) -> 1, logarithmically slowly
    const double beta = 1e8;
    const double e = ebeta_hardcore({1.0, Beta{beta}, Dim::two});
    REQUIRE_THAT(e * std::log(beta) / (8.0 * pi), WithinAbs(1.0, 0.15));
}

TEST_CASE("parameter validation") {
    REQUIRE_THROWS_AS(ebeta_hardcore({0.0, Beta{1.0}, Dim::three}), std::invalid_argument);
    REQUIRE_THROWS_AS(ebeta_hardcore({1.0, Beta{0.0}, Dim::three}), std::invalid_argument);
    REQUIRE_THROWS_AS(hardcore_profile({1.0, Beta{1.0}, Dim::two}, -1.0), std::invalid_argument);
}
