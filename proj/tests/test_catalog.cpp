#include <doctest.h>

#include "hbell/catalog.hpp"
#include "hbell/error.hpp"

#include <cmath>

using namespace hbell;

TEST_CASE("tmss_coefficients") {
    const auto v = tmss(0.6, 40);
    CHECK(v[0] == doctest::Approx(0.8));
    CHECK(v[3] == doctest::Approx(0.8 * 0.216));
    CHECK(v.normalized());
    CHECK_THROWS_AS(tmss(1.0, 4), Error);
    CHECK_THROWS_AS(tmss(-0.1, 4), Error);
}

TEST_CASE("bessel_i0_matches_library") {
    for (double x : {0.0, 0.1, 1.0, 2.5, 7.0, 20.0}) {
        CHECK(bessel_i0(x) == doctest::Approx(std::cyl_bessel_i(0.0, x)).epsilon(1e-14));
    }
}

TEST_CASE("circle_state_is_normalized") {
    for (double r : {0.3, 1.12, 2.0, 3.0}) {
        const auto s = make_state({Family::Circle, r, std::nullopt, {}});
        double sum = 0.0;
        for (double c : s.state.coeffs()) sum += c * c;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-11));
        CHECK(s.state.converged());
    }
    CHECK(circle(0.0, 3) == CoefficientVector({1.0, 0.0, 0.0, 0.0}));
}

TEST_CASE("circle_coefficients_from_definition") {
    const double r = 1.12;
    const auto v = circle(r, 10);
    const double norm = std::sqrt(std::cyl_bessel_i(0.0, 2 * r * r));
    CHECK(v[0] == doctest::Approx(1.0 / norm));
    CHECK(v[3] == doctest::Approx(std::pow(r, 6) / 6.0 / norm));
}

TEST_CASE("photon_subtracted_tmss_is_normalized") {
    for (double l : {0.1, 0.6, 0.8}) {
        const auto s = make_state({Family::PhotonSubtractedTmss, l, std::nullopt, {}});
        CHECK(s.state.normalized());
        CHECK(s.state[1] / s.state[0] == doctest::Approx(2 * l));
    }
}

TEST_CASE("seed_state") {
    const auto v = seed(1.0 / std::sqrt(2.0), 3);
    CHECK(v.cutoff() == 3);
    CHECK(v[0] == doctest::Approx(std::sqrt(2.0 / 3.0)));
    CHECK(v[1] == doctest::Approx(std::sqrt(1.0 / 3.0)));
    CHECK(v[2] == 0.0);
    CHECK(v.normalized());
}

TEST_CASE("seed_transmissivity_small_lambda_limit") {
    const double xi = 1.0 / std::sqrt(2.0);
    for (double l : {1e-4, 1e-3}) CHECK(seed_transmissivity(xi, l) == doctest::Approx(l / xi).epsilon(1e-5));
    CHECK_THROWS_AS(seed_transmissivity(xi, 0.0), Error);
}

TEST_CASE("squeezing_conversion_roundtrips") {
    for (double l : {0.0, 0.3, 0.9}) CHECK(lambda_from_squeezing(squeezing_from_lambda(l)) == doctest::Approx(l));
    CHECK(squeezing_from_lambda(std::tanh(0.5)) == doctest::Approx(0.5));
}

TEST_CASE("auto_cutoff_is_smallest_converged_level") {
    const auto s = make_state({Family::Tmss, 0.6, std::nullopt, {}});
    // 0.64 · 0.36^N < 1e-12 first at N = 27
    CHECK(s.state.cutoff() == 27);
    CHECK(s.warnings.empty());
    CHECK(s.tail_mass < 1e-11);
}

TEST_CASE("auto_cutoff_is_capped_with_warning") {
    const auto s = make_state({Family::Tmss, 0.95, std::nullopt, {}});
    CHECK(s.state.cutoff() == kMaxAutoCutoff);
    CHECK_FALSE(s.warnings.empty());
    CHECK(s.tail_mass == doctest::Approx(std::pow(0.95, 2.0 * 65)).epsilon(1e-6));
}

TEST_CASE("explicit_cutoff_is_honored") {
    const auto s = make_state({Family::Circle, 1.12, std::size_t{4}, {}});
    CHECK(s.state.cutoff() == 4);
    CHECK_FALSE(s.warnings.empty());
}

TEST_CASE("provenance_strings") {
    CHECK(provenance({Family::Tmss, 0.6, std::nullopt, {}}) == "tmss(0.6)");
    CHECK(provenance({Family::Circle, 1.12, std::nullopt, {}}) == "circle(1.12)");
    CHECK(provenance({Family::PhotonSubtractedTmss, 0.6, std::nullopt, {}}) == "ps_tmss(0.6)");
}

TEST_CASE("family_names_parse") {
    CHECK(parse_family("ps-tmss") == Family::PhotonSubtractedTmss);
    CHECK(parse_family("ps_tmss") == Family::PhotonSubtractedTmss);
    CHECK(parse_family("circle") == Family::Circle);
    CHECK(family_name(Family::Seed) == "seed");
    CHECK_THROWS_AS(parse_family("coherent"), Error);
}
