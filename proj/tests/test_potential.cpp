#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "scatlen/potential.hpp"
#include "support/potentials.hpp"
#include "support/quadrature.hpp"

using namespace scatlen;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("validation accepts a plain hard sphere") {
    auto v = RadialPotential::validated(1.0, {}, {});
    REQUIRE(v.hard_core_radius() == 1.0);
    REQUIRE(v.shells().empty());
    REQUIRE(v.segments().empty());
    REQUIRE(v.has_core());
    REQUIRE_FALSE(v.is_zero());
}

TEST_CASE("validation rejects bad inputs") {
    SECTION("negative density") {
        REQUIRE_THROWS_AS(
            RadialPotential::validated(0.0, {}, {Segment{0.0, 1.0, ConstantForm{-1.0}}}),
            std::invalid_argument);
    }
    SECTION("shell inside hard core") {
        REQUIRE_THROWS_AS(RadialPotential::validated(1.0, {Shell{0.5, 1.0}}, {}),
                          std::invalid_argument);
    }
    SECTION("overlapping segments") {
        REQUIRE_THROWS_AS(RadialPotential::validated(0.0, {},
                                                     {Segment{0.0, 2.0, ConstantForm{1.0}},
                                                      Segment{1.0, 3.0, ConstantForm{1.0}}}),
                          std::invalid_argument);
    }
    SECTION("segment starting inside hard core") {
        REQUIRE_THROWS_AS(
            RadialPotential::validated(1.0, {}, {Segment{0.5, 2.0, ConstantForm{1.0}}}),
            std::invalid_argument);
    }
    SECTION("shell radii must increase") {
        REQUIRE_THROWS_AS(RadialPotential::validated(0.0, {Shell{1.0, 1.0}, Shell{1.0, 2.0}}, {}),
                          std::invalid_argument);
    }
    SECTION("constant segment cannot reach infinity") {
        REQUIRE_THROWS_AS(
            RadialPotential::validated(0.0, {}, {Segment{0.0, inf, ConstantForm{1.0}}}),
            std::invalid_argument);
    }
}

TEST_CASE("volume integral: closed forms against quadrature") {
    SECTION("hard sphere has no tail") {
        REQUIRE(volume_integral(corpus::hard_core(1.0), 2.0, Dim::three) == 0.0);
    }
    SECTION("p = 4 power tail, d = 3") {
        auto v = corpus::power_tail(1.0, 4.0, 1.0);
        const double got = volume_integral(v, 1.0, Dim::three);
        REQUIRE_THAT(got, WithinRel(4.0 * pi, 1e-13));
        const double quad =
            4.0 * pi * oracle::integrate_to_inf([](double r) { return std::pow(r, -2.0); }, 1.0);
        REQUIRE_THAT(got, WithinRel(quad, 1e-9));
    }
    SECTION("delta shell carries its surface measure") {
        auto v = corpus::delta_shell(2.0, 3.0);
        REQUIRE_THAT(volume_integral(v, 1.0, Dim::three), WithinRel(48.0 * pi, 1e-13));
        REQUIRE_THAT(volume_integral(v, 1.0, Dim::two), WithinRel(2.0 * pi * 2.0 * 3.0, 1e-13));
        REQUIRE(volume_integral(v, 2.0, Dim::three) == 0.0); // strictly outside
    }
    SECTION("p = 3 tail diverges in d = 3") {
        REQUIRE(std::isinf(volume_integral(corpus::power_tail(1.0, 3.0, 1.0), 1.0, Dim::three)));
    }
    SECTION("square well against quadrature, both dimensions") {
        auto v = corpus::square_well(2.5, 1.5);
        const double got3 = volume_integral(v, 0.0, Dim::three);
        REQUIRE_THAT(got3, WithinRel(4.0 * pi * 2.5 * std::pow(1.5, 3) / 3.0, 1e-13));
        const double got2 = volume_integral(v, 0.5, Dim::two);
        const double quad2 =
            2.0 * pi * oracle::integrate([](double r) { return 2.5 * r; }, 0.5, 1.5);
        REQUIRE_THAT(got2, WithinRel(quad2, 1e-10));
    }
    SECTION("exponential tail against quadrature") {
        auto v = corpus::exp_tail(1.7, 2.0, 0.5);
        const double got = volume_integral(v, 1.0, Dim::three);
        const double quad = 4.0 * pi * oracle::integrate_to_inf(
                                           [](double r) { return 1.7 * std::exp(-2.0 * r) * r * r; },
                                           1.0);
        REQUIRE_THAT(got, WithinRel(quad, 1e-9));
        const double got2 = volume_integral(v, 0.5, Dim::two);
        const double quad2 = 2.0 * pi * oracle::integrate_to_inf(
                                            [](double r) { return 1.7 * std::exp(-2.0 * r) * r; },
                                            0.5);
        REQUIRE_THAT(got2, WithinRel(quad2, 1e-9));
    }
    SECTION("b inside the hard core is rejected") {
        REQUIRE_THROWS_AS(volume_integral(corpus::hard_core(1.0), 0.5, Dim::three),
                          std::invalid_argument);
    }
}

TEST_CASE("log-weighted tail: closed forms against quadrature") {
    SECTION("hard disc has no tail") {
        REQUIRE(log_weighted_tail(corpus::hard_core(1.0), 2.0, 2.0) == 0.0);
    }
    SECTION("shell at s = e contributes 2 pi e gamma") {
        auto v = corpus::delta_shell(std::exp(1.0), 1.5);
        const double got = log_weighted_tail(v, 1.0, 1.0);
        REQUIRE_THAT(got, WithinRel(2.0 * pi * std::exp(1.0) * 1.5, 1e-13));
    }
    SECTION("p = 3 power tail equals 4 pi") {
        auto v = corpus::power_tail(1.0, 3.0, 1.0);
        const double got = log_weighted_tail(v, 1.0, 1.0);
        REQUIRE_THAT(got, WithinRel(4.0 * pi, 1e-12));
        const double quad = 2.0 * pi * oracle::integrate_to_inf(
                                           [](double r) {
                                               const double L = std::log(r);
                                               return std::pow(r, -3.0) * r * L * L;
                                           },
                                           1.0, 1e-13);
        REQUIRE_THAT(got, WithinRel(quad, 1e-8));
    }
    SECTION("constant segment against quadrature with shifted ref") {
        auto v = corpus::square_well(1.3, 2.0);
        const double got = log_weighted_tail(v, 0.5, 0.7);
        const double quad = 2.0 * pi * oracle::integrate(
                                           [](double r) {
                                               const double L = std::log(r / 0.7);
                                               return 1.3 * r * L * L;
                                           },
                                           0.5, 2.0);
        REQUIRE_THAT(got, WithinRel(quad, 1e-10));
    }
    SECTION("exponential segment against quadrature") {
        auto v = corpus::exp_tail(0.8, 1.5, 0.5);
        const double got = log_weighted_tail(v, 0.6, 0.9);
        const double quad = 2.0 * pi * oracle::integrate_to_inf(
                                           [](double r) {
                                               const double L = std::log(r / 0.9);
                                               return 0.8 * std::exp(-1.5 * r) * r * L * L;
                                           },
                                           0.6, 1e-13);
        REQUIRE_THAT(got, WithinRel(quad, 1e-9));
    }
    SECTION("p = 2 power tail diverges") {
        REQUIRE(std::isinf(log_weighted_tail(corpus::power_tail(1.0, 2.0, 1.0), 1.0, 1.0)));
    }
}

TEST_CASE("tail moments are non-increasing in b") {
    auto vols = [](const RadialPotential& v, Dim d) {
        double prev = inf;
        for (double b : {0.5, 0.8, 1.0, 1.5, 2.0, 3.0, 5.0, 9.0}) {
            if (b < v.hard_core_radius()) continue;
            const double t = volume_integral(v, b, d);
            REQUIRE(t <= prev * (1.0 + 1e-12) + 1e-12);
            prev = t;
        }
    };
    vols(corpus::power_tail(2.0, 4.0, 0.5), Dim::three);
    vols(corpus::exp_tail(1.0, 1.0, 0.0), Dim::two);
    vols(corpus::delta_shell(2.0, 1.0), Dim::three);

    double prev = inf;
    auto v = corpus::power_tail(1.0, 4.0, 0.5);
    for (double b : {0.6, 1.0, 2.0, 4.0}) {
        const double t = log_weighted_tail(v, b, b);
        REQUIRE(t >= 0.0);
        REQUIRE(t <= prev * (1.0 + 1e-12) + 1e-12);
        prev = t;
    }
}

TEST_CASE("finiteness check") {
    SECTION("hard sphere: finite with a_upper equal to the core radius") {
        auto rep = finiteness_check(corpus::hard_core(1.0), Dim::three);
        REQUIRE(rep.verdict == Finiteness::finite);
        REQUIRE(rep.a_upper_3d.has_value());
        REQUIRE_THAT(*rep.a_upper_3d, WithinRel(1.0, 1e-9));
    }
    SECTION("p = 3 tail: infinite in d = 3") {
        auto rep = finiteness_check(corpus::power_tail(1.0, 3.0, 1.0), Dim::three);
        REQUIRE(rep.verdict == Finiteness::infinite);
        REQUIRE(rep.diverging_moment.has_value());
        REQUIRE_FALSE(rep.a_upper_3d.has_value());
    }
    SECTION("p = 4, C = 8 pi: minimized bound equals 4 sqrt(pi)") {
        // f(b) = b + 4 pi / b on b >= 1, minimum 4 sqrt(pi) at b = 2 sqrt(pi)
        auto v = corpus::power_tail(8.0 * pi, 4.0, 1.0);
        auto rep = finiteness_check(v, Dim::three);
        REQUIRE(rep.verdict == Finiteness::finite);
        REQUIRE_THAT(*rep.a_upper_3d, WithinRel(4.0 * std::sqrt(pi), 1e-8));
    }
    SECTION("every finite-range potential is finite") {
        for (const auto& v : {corpus::zero(), corpus::hard_core(2.0), corpus::square_well(),
                              corpus::delta_shell()}) {
            REQUIRE(finiteness_check(v, Dim::three).verdict == Finiteness::finite);
            REQUIRE(finiteness_check(v, Dim::two).verdict == Finiteness::finite);
        }
    }
    SECTION("d = 2 reports the logarithmic bound") {
        auto rep = finiteness_check(corpus::hard_core(1.0), Dim::two);
        REQUIRE(rep.verdict == Finiteness::finite);
        REQUIRE(rep.a_upper_2d.has_value());
        REQUIRE_THAT(*rep.a_upper_2d, WithinRel(1.0, 1e-9));
        // p > 2 suffices in two dimensions even though the volume moment
        // appears only for p > 2 as well; p = 2.5 is finite
        auto rep2 = finiteness_check(corpus::power_tail(1.0, 2.5, 1.0), Dim::two);
        REQUIRE(rep2.verdict == Finiteness::finite);
        auto rep3 = finiteness_check(corpus::power_tail(1.0, 2.0, 1.0), Dim::two);
        REQUIRE(rep3.verdict == Finiteness::infinite);
    }
}
