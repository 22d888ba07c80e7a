#pragma once

// Beam splitters in the Fock basis, on/off detection and photon subtraction.
//
// Operator convention (two modes a, b):
//     U = T^{a†a} exp(−R* b†a) exp(R b a†) T^{−b†b}
// which maps a† → T a† − R* b† and b† → R a† + T* b†. Matrix elements are
// evaluated from that mode transformation as finite sums; the tests check
// them against direct exponentiation of the ordered product.

#include "hbell/fock.hpp"
#include "hbell/kernels.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace hbell {

struct BeamSplitter {
    cplx T;
    cplx R;

    /// Throws unless |T|² + |R|² = 1 within 1e-12.
    BeamSplitter(cplx transmissivity, cplx reflectivity);

    static BeamSplitter identity() { return {1.0, 0.0}; }
    /// 50:50 with real T = R = 1/√2.
    static BeamSplitter balanced();
    /// Real amplitude transmissivity t, reflectivity √(1−t²)·e^{i·phase}.
    static BeamSplitter from_transmissivity(double t, double reflectivity_phase = 0.0);
};

enum class DetectorKind { Vacuum, Click, ExactCount };

/// Π₀ = |0><0|, Π₁ = I − |0><0|, or a number-resolving projector |k><k|.
struct DetectorOutcome {
    DetectorKind kind = DetectorKind::Vacuum;
    std::size_t count = 0;

    static DetectorOutcome vacuum() { return {DetectorKind::Vacuum, 0}; }
    static DetectorOutcome click() { return {DetectorKind::Click, 0}; }
    static DetectorOutcome exact(std::size_t k) { return {DetectorKind::ExactCount, k}; }

    /// Photon counts in [0, cutoff] accepted by this outcome.
    std::vector<std::size_t> accepted_counts(std::size_t cutoff) const;
};

/// Value plus the norm lost to the Fock cutoff.
template <class T>
struct Truncated {
    T value;
    double discarded_mass = 0.0;
    std::vector<std::string> warnings;
};

/// <j,k|U|m,n>; zero unless j + k = m + n.
cplx bs_matrix_element(const BeamSplitter& bs, std::size_t j, std::size_t k, std::size_t m, std::size_t n);

/// All matrix elements up to `max_total` photons, blocked by total photon number.
kernels::BlockUnitary bs_blocks(const BeamSplitter& bs, std::size_t max_total);

/// Output keeps the input cutoffs; amplitude pushed above them is reported.
Truncated<TwoModeAmplitudeMatrix> apply_bs_two_mode(const BeamSplitter& bs, const TwoModeAmplitudeMatrix& s);

/// Which tensor axes each beam splitter mixes. Default: U_ac ⊗ U_bd.
struct ModePairing {
    std::array<std::size_t, 2> first{0, 2};
    std::array<std::size_t, 2> second{1, 3};
};

Truncated<FourModeTensor> apply_bs_pair_on_four_modes(const BeamSplitter& bs, const FourModeTensor& t,
                                                      ModePairing pairing = {});

/// Modes measured by the two detectors; the remaining two (in axis order)
/// carry the conditional state.
struct DetectedModes {
    std::size_t first = 2;
    std::size_t second = 3;
};

/// Probability of the outcome pattern (never throws on zero).
double outcome_probability(const FourModeTensor& t, const std::array<DetectorOutcome, 2>& outcomes,
                           DetectedModes detected = {});

/// Born-rule conditioning. A Click keeps one branch per count k >= 1 so the
/// result is the full mixture; Vacuum and ExactCount keep one branch each.
/// Zero success probability throws.
ConditionalEnsemble condition_on_outcome(const FourModeTensor& t, const std::array<DetectorOutcome, 2>& outcomes,
                                         DetectedModes detected = {});

/// Normalized c'_n ∝ (n+1) c_{n+1} (the state a b Σ c_n|n,n>), cutoff N−1.
CoefficientVector photon_subtract_exact(const CoefficientVector& v);

/// Single-mode Kraus operator for "ancilla in vacuum, ancilla detector reads
/// exactly one photon" at reflectivity r, as a dense (N+1)×(N+1) matrix
/// [out][in]. SecondOrder keeps the unitary to O(r²); Exact uses all orders.
enum class Expansion { SecondOrder, Exact };
std::vector<double> subtraction_kraus(double r, std::size_t cutoff, Expansion expansion);

struct SubtractionResult {
    CoefficientVector state;
    double success_probability;
};

/// Each mode mixed with vacuum at reflectivity r, both ancillas conditioned on
/// N = 1, unitary expanded to second order in r. Requires 0 < r < 0.5.
SubtractionResult photon_subtract_beamsplitter(const CoefficientVector& v, double r,
                                               Expansion expansion = Expansion::SecondOrder);

}  // namespace hbell
