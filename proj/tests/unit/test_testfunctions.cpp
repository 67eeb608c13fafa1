#include "doctest.h"
#include "ipm1d/testfunctions.hpp"

#include <cmath>

using namespace ipm1d;

TEST_CASE("gaussian closed forms") {
    const auto f = make_gaussian(1.0, 1.0);
    CHECK(f(0.0) == 1.0);
    CHECK(f(2.0) == doctest::Approx(std::exp(-4.0)).epsilon(1e-15));
    CHECK(f.derivative(1.0) == doctest::Approx(-2.0 * std::exp(-1.0)).epsilon(1e-15));
    CHECK(f.monotone_decreasing);
    CHECK_FALSE(make_gaussian(-1.0, 1.0).monotone_decreasing);
    CHECK_THROWS_AS(make_gaussian(1.0, 0.0), ParameterError);
}

TEST_CASE("increasing saturating") {
    const auto f = make_increasing_saturating(1.0, 1.0);
    CHECK(f(0.0) == 0.0);
    CHECK(f(3.0) == doctest::Approx(1.0 - std::exp(-9.0)).epsilon(1e-15));
    CHECK(std::abs(f(40.0) - 1.0) < 1e-15);
    CHECK(make_increasing_saturating(2.0, 1.0).sup_norm == 2.0);
    CHECK(f.vanishes_at_origin);
    CHECK(f.monotone_increasing);
    CHECK_THROWS_AS(make_increasing_saturating(0.0, 1.0), ParameterError);
}

TEST_CASE("random families honour their flags") {
    FunctionFamilySpec spec;
    spec.family = Family::GaussianMixture;
    spec.terms = 3;
    spec.seed = 1;
    const auto f = make_random_even(spec);
    CHECK(f.monotone_decreasing);
    for (int i = 1; i <= 1000; ++i) {
        CHECK(f.derivative(0.01 * i) <= 0.0);
    }

    spec.seed = 2;
    spec.off_center = true;
    const auto g = make_random_even(spec);
    CHECK(g.even);
    CHECK_FALSE(g.monotone_decreasing);
    bool rises = false;
    for (int i = 1; i <= 1000 && !rises; ++i) {
        rises = g.derivative(0.01 * i) > 0.0;
    }
    CHECK(rises);

    spec.amplitude_scale = 0.0;
    const auto z = make_random_even(spec);
    CHECK(z(1.3) == 0.0);
    CHECK(z.even);
    CHECK(z.monotone_decreasing);
    CHECK(z.vanishes_at_origin);
}

TEST_CASE("flag soundness and derivative consistency over many seeds") {
    for (Family fam : {Family::GaussianBump, Family::GaussianMixture, Family::SechProfile,
                       Family::Plateau, Family::IncreasingSaturating}) {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            FunctionFamilySpec spec;
            spec.family = fam;
            spec.seed = seed;
            spec.terms = 5;
            const auto f = make_random_even(spec);
            const auto check = verify_flags(f);
            INFO(f.id, " defect ", check.max_derivative_defect);
            CHECK(check.all());
            if (fam == Family::GaussianMixture) {
                spec.off_center = true;
                const auto g = make_random_even(spec);
                CHECK(verify_flags(g).all());
                CHECK(g.sup_norm >= g(0.0));
            }
        }
    }
}

TEST_CASE("deterministic generation") {
    FunctionFamilySpec spec;
    spec.family = Family::SechProfile;
    spec.seed = 7;
    CHECK(make_random_even(spec)(0.4) == make_random_even(spec)(0.4));
    CHECK(parse_family("plateau") == Family::Plateau);
    CHECK_THROWS_AS(parse_family("nope"), ParameterError);
}
