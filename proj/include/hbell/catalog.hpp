#pragma once

// Closed-form coefficient generators for the named state families.

#include "hbell/fock.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hbell {

/// Cap for automatic cutoff selection.
inline constexpr std::size_t kMaxAutoCutoff = 64;

enum class Family { Tmss, Circle, PhotonSubtractedTmss, Seed, Custom };

struct CatalogSpec {
    Family family = Family::Tmss;
    /// λ for Tmss / PhotonSubtractedTmss, r for Circle, ξ for Seed.
    double parameter = 0.0;
    /// Unset: smallest N with c_N² < 1e-12, capped at kMaxAutoCutoff.
    std::optional<std::size_t> cutoff;
    /// State file for Custom.
    std::string path;
};

struct CatalogState {
    CoefficientVector state;
    /// 1 − Σ_{n<=N} c_n² against the family's exact unit norm.
    double tail_mass = 0.0;
    std::string provenance;
    std::vector<std::string> warnings;
};

/// c_n = λ^n √(1−λ²).
CoefficientVector tmss(double lambda, std::size_t cutoff);
/// c_n = r^{2n} / (n! √I₀(2r²)).
CoefficientVector circle(double r, std::size_t cutoff);
/// c_n = √((1−λ²)³/(1+λ²)) (n+1) λ^n.
CoefficientVector ps_tmss(double lambda, std::size_t cutoff);
/// (1, ξ) / √(1+ξ²), zero-padded.
CoefficientVector seed(double xi, std::size_t cutoff);

/// |T(λ)| = |ξ − √(ξ² + 8λ²)| / (4λ), the printed stage-1 beam-splitter
/// parameter. Throws for λ = 0.
double seed_transmissivity(double xi, double lambda);

/// Modified Bessel I₀ by power series with term-ratio recurrence.
double bessel_i0(double x);

double squeezing_from_lambda(double lambda);
double lambda_from_squeezing(double s);

/// Builds a catalog state, choosing the cutoff automatically when unset.
CatalogState make_state(const CatalogSpec& spec);

/// "tmss(0.6)", "circle(1.12)", "ps_tmss(0.6)", "seed(0.7071067811865476)", "custom(path)".
std::string provenance(const CatalogSpec& spec);

std::string family_name(Family f);
/// Accepts tmss, circle, ps-tmss (or ps_tmss), seed, custom.
Family parse_family(const std::string& name);

}  // namespace hbell
