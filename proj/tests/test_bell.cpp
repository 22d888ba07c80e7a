#include <doctest.h>

#include "hbell/bell.hpp"
#include "hbell/catalog.hpp"
#include "hbell/error.hpp"
#include "hbell/pipeline.hpp"
#include "test_util.hpp"

#include <cmath>
#include <numbers>

using namespace hbell;

namespace {

constexpr double kPi = std::numbers::pi;

// Sheppard: for jointly Gaussian x, y with correlation ρ, P(x>0, y>0) = 1/4 + asin(ρ)/(2π).
double gaussian_p_pp(double lambda, double chi) {
    const double rho = 2 * lambda / (1 + lambda * lambda) * std::cos(chi);
    return 0.25 + std::asin(rho) / (2 * kPi);
}

std::vector<CoefficientVector> catalog_states() {
    std::vector<CoefficientVector> out;
    for (double l : {0.2, 0.6}) out.push_back(normalize(make_state({Family::Tmss, l, std::nullopt, {}}).state));
    for (double l : {0.3, 0.6})
        out.push_back(normalize(make_state({Family::PhotonSubtractedTmss, l, std::nullopt, {}}).state));
    for (double r : {0.8, 1.12}) out.push_back(normalize(make_state({Family::Circle, r, std::nullopt, {}}).state));
    out.push_back(seed(1 / std::numbers::sqrt2, 1));
    out.push_back(run_pipeline({}).final_state());
    return out;
}

}  // namespace

TEST_CASE("hermite_wavefunction_values") {
    CHECK(hermite_wavefunction(0, 0.0) == doctest::Approx(std::pow(kPi, -0.25)));
    CHECK(hermite_wavefunction(1, 0.0) == 0.0);
    CHECK(hermite_wavefunction(2, 0.0) == doctest::Approx(-std::pow(kPi, -0.25) / std::sqrt(2.0)));
}

TEST_CASE("gauss_legendre_integrates_polynomials") {
    const auto rule = composite_gauss_legendre(-1.0, 2.0, 3, 8);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 15);
    CHECK(s == doctest::Approx((std::pow(2.0, 16) - 1.0) / 16.0).epsilon(1e-13));
    CHECK_THROWS_AS(composite_gauss_legendre(1.0, 0.0, 2, 4), Error);
}

TEST_CASE("overlap_closed_form_values") {
    const OverlapTable g(3);
    CHECK(g(0, 0) == 0.5);
    CHECK(g(0, 1) == doctest::Approx(1 / std::sqrt(2 * kPi)).epsilon(1e-15));
    CHECK(g(0, 2) == 0.0);
    // ∫_0^∞ ψ_1 ψ_2 = ∫_0^∞ x(2x² − 1) e^{−x²} / √π = 1/(2√π)
    CHECK(g(1, 2) == doctest::Approx(1 / (2 * std::sqrt(kPi))).epsilon(1e-14));
}

TEST_CASE("overlap_wronskian_matches_quadrature") {
    const OverlapTable w(32), q(32, OverlapMethod::Quadrature);
    double err = 0.0;
    for (std::size_t n = 0; n <= 32; ++n)
        for (std::size_t m = 0; m <= 32; ++m) err = std::max(err, std::abs(w(n, m) - q(n, m)));
    CHECK(err < 1e-12);
}

TEST_CASE("overlap_invariants_hold_exhaustively") {
    CHECK(OverlapTable(32).invariant_error() == 0.0);
    CHECK(OverlapTable(32, OverlapMethod::Quadrature).invariant_error() < 1e-12);
    CHECK(OverlapTable(64).invariant_error() == 0.0);
}

TEST_CASE("vacuum_has_independent_fair_signs") {
    const CoefficientVector v;
    for (double chi : {0.0, 0.5, kPi / 4, 2.0}) {
        CHECK(p_plus_plus(v, chi) == doctest::Approx(0.25));
        CHECK(correlation_E(v, chi) == doctest::Approx(0.0));
    }
    CHECK(chsh_B(v, kPi / 4) == doctest::Approx(0.0));
    CHECK(ch_S(v, kPi / 4) == doctest::Approx(0.5));
}

TEST_CASE("tmss_matches_gaussian_orthant_formula") {
    for (double l : {0.1, 0.4, 0.6}) {
        // orthant formula is for the untruncated state; auto cutoff would cost ~1e-9
        const auto v = normalize(make_state({Family::Tmss, l, 64, {}}).state);
        for (double chi : {0.0, 0.3, kPi / 4, 1.3, 3 * kPi / 4}) {
            CHECK(p_plus_plus(v, chi) == doctest::Approx(gaussian_p_pp(l, chi)).epsilon(1e-10));
        }
    }
}

TEST_CASE("closed_form_matches_quadrature_oracle") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 2 * kPi);
    for (const auto& v : catalog_states()) {
        QuadratureGrid grid;
        grid.x_max = std::max(12.0, std::sqrt(2.0 * static_cast<double>(v.cutoff()) + 1.0) + 6.0);
        for (int k = 0; k < 20; ++k) {
            const double chi = u(rng);
            CHECK(std::abs(p_plus_plus(v, chi) - p_plus_plus_quadrature_oracle(v, chi, grid)) < 1e-8);
        }
    }
}

TEST_CASE("quadrature_scale_convention_does_not_change_signs") {
    const auto v = run_pipeline({}).final_state();
    QuadratureGrid g1, g2;
    g2.scale = 2.0;
    g2.panels = 96;
    CHECK(p_plus_plus_quadrature_oracle(v, 0.7, g1) == doctest::Approx(p_plus_plus_quadrature_oracle(v, 0.7, g2)).epsilon(1e-10));
}

TEST_CASE("quadrants_sum_to_one_and_marginals_are_fair") {
    std::mt19937_64 rng(12);
    const BellEvaluator ev(12);
    for (int k = 0; k < 10; ++k) {
        const auto v = testutil::random_state(rng, 12);
        const double chi = 0.37 * k;
        const double total = ev.quadrant(v, chi, 1, 1) + ev.quadrant(v, chi, 1, -1) + ev.quadrant(v, chi, -1, 1) +
                             ev.quadrant(v, chi, -1, -1);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ev.marginal_plus(v, chi) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(ev.quadrant(v, chi, 1, 1) == doctest::Approx(ev.quadrant(v, chi, -1, -1)).epsilon(1e-12));
    }
}

TEST_CASE("ch_identity_holds_on_random_states") {
    std::mt19937_64 rng(21);
    const BellEvaluator ev(16);
    for (int k = 0; k < 50; ++k) {
        const auto v = testutil::random_state(rng, 16);
        const double chi = 0.05 + 0.03 * k;
        CHECK(std::abs(ev.ch(v, chi) - (ev.chsh(v, chi) / 4 + 0.5)) < 1e-10);
    }
}

TEST_CASE("literal_chsh_angles_reproduce_simplified_form") {
    const auto v = run_pipeline({}).final_state();
    const BellEvaluator ev(v.cutoff());
    CHECK(ev.chsh_literal(v, {}) == doctest::Approx(ev.chsh(v, kPi / 4)).epsilon(1e-12));
}

TEST_CASE("literal_ch_angles_are_reported_separately") {
    const auto v = run_pipeline({}).final_state();
    const auto r = bell_report(v, kPi / 4, "pipeline");
    // P₊₊(π/4) + P₊₊(3π/4) over two fair marginals is exactly 1/2
    CHECK(r.S_literal_angles == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.diagnostics.size() == 1);
    CHECK(r.B == doctest::Approx(r.B_literal_angles).epsilon(1e-12));
}

TEST_CASE("bell_report_fields") {
    const auto v = run_pipeline({}).final_state();
    const auto r = bell_report(v, kPi / 4, "x");
    CHECK(r.B == doctest::Approx(3 * r.E_chi - r.E_3chi));
    CHECK(r.S == doctest::Approx(3 * r.p_pp_chi - r.p_pp_3chi));
    CHECK(r.E_chi == doctest::Approx(4 * r.p_pp_chi - 1).epsilon(1e-12));
    CHECK(r.cutoff == 32);
    CHECK(r.provenance == "x");
    CHECK(r.B == doctest::Approx(2.0715).epsilon(1e-4));
}

TEST_CASE("evaluator_rejects_invalid_states") {
    const BellEvaluator ev(4);
    CHECK_THROWS_AS(ev.p_plus_plus(CoefficientVector({1.0, 1.0}), 0.1), Error);
    CHECK_THROWS_AS(ev.p_plus_plus(CoefficientVector::vacuum(5), 0.1), Error);
    CHECK_NOTHROW(ev.p_plus_plus(CoefficientVector::vacuum(3), 0.1));
}

TEST_CASE("unconverged_state_gets_diagnostic") {
    const auto v = normalize(CoefficientVector({1.0, 1.0}));
    const auto r = bell_report(v, kPi / 4, "flat");
    bool found = false;
    for (const auto& d : r.diagnostics) found |= d.find("tail") != std::string::npos;
    CHECK(found);
}
