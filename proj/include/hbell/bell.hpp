#pragma once

// Quadrature statistics and Bell functionals for photon-number-correlated states.
//
// Alice measures x_θ, Bob x_φ, both dichotomized by sign (+1 iff x >= 0). For
// Σ c_n|n,n> with real c_n the quadrant probabilities depend only on χ = θ + φ:
//
//     P_{++}(χ) = Σ_{nm} c_n c_m cos((n−m)χ) G_{nm}²,   G_{nm} = ∫_0^∞ ψ_n ψ_m dx.
//
// Flipping one party's sign multiplies G_{nm} by (−1)^{n+m}.

#include "hbell/fock.hpp"

#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

namespace hbell {

/// ψ_n(x) = H_n(x) e^{−x²/2} / √(2^n n! √π).
double hermite_wavefunction(std::size_t n, double x);

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss–Legendre of the given order on each of `panels` equal subintervals of [a, b].
QuadratureRule composite_gauss_legendre(double a, double b, std::size_t panels, std::size_t order);

enum class OverlapMethod {
    Wronskian,   ///< closed form from ψ_n(0), ψ_n'(0)
    Quadrature,  ///< composite Gauss–Legendre on [0, x_max]
};

/// Half-line overlaps G_{nm}, n, m <= N.
class OverlapTable {
public:
    OverlapTable(std::size_t cutoff, OverlapMethod method = OverlapMethod::Wronskian);

    std::size_t cutoff() const noexcept { return levels_ - 1; }
    std::size_t levels() const noexcept { return levels_; }
    double operator()(std::size_t n, std::size_t m) const { return g_[n * levels_ + m]; }
    const std::vector<double>& data() const noexcept { return g_; }

    /// Largest violation of symmetry, G_nn = 1/2 and same-parity zeros.
    double invariant_error() const noexcept;

private:
    std::size_t levels_;
    std::vector<double> g_;
};

inline OverlapTable overlap_table(std::size_t cutoff, OverlapMethod method = OverlapMethod::Wronskian) {
    return OverlapTable(cutoff, method);
}

struct BellAngles {
    double theta1 = 0.0;
    double theta2 = std::numbers::pi / 2;
    double phi1 = -std::numbers::pi / 4;
    double phi2 = std::numbers::pi / 4;
};

/// Evaluates Bell quantities against one shared overlap table.
class BellEvaluator {
public:
    explicit BellEvaluator(std::size_t cutoff);
    explicit BellEvaluator(OverlapTable table);

    const OverlapTable& table() const noexcept { return table_; }

    /// sign_a, sign_b ∈ {+1, −1}.
    double quadrant(const CoefficientVector& v, double chi, int sign_a, int sign_b) const;
    double p_plus_plus(const CoefficientVector& v, double chi) const { return quadrant(v, chi, +1, +1); }
    double marginal_plus(const CoefficientVector& v, double theta) const;
    double correlation(const CoefficientVector& v, double chi) const;
    double chsh(const CoefficientVector& v, double chi) const;
    double ch(const CoefficientVector& v, double chi) const;
    /// E(θ₁,φ₁) + E(θ₁,φ₂) + E(θ₂,φ₁) − E(θ₂,φ₂) with E(θ,φ) = E(θ+φ).
    double chsh_literal(const CoefficientVector& v, const BellAngles& a) const;
    /// [P₊₊(θ₁,φ₁) − P₊₊(θ₁,φ₂) + P₊₊(θ₂,φ₁) + P₊₊(θ₂,φ₂)] / [P₊^A(θ₂) + P₊^B(φ₁)].
    double ch_literal(const CoefficientVector& v, const BellAngles& a) const;

private:
    void check(const CoefficientVector& v) const;

    OverlapTable table_;
};

double p_plus_plus(const CoefficientVector& v, double chi);
double marginal_plus(const CoefficientVector& v, double theta);
double correlation_E(const CoefficientVector& v, double chi);
/// B = 3E(χ) − E(3χ).
double chsh_B(const CoefficientVector& v, double chi);
/// S = 3P₊₊(χ) − P₊₊(3χ).
double ch_S(const CoefficientVector& v, double chi);

struct BellReport {
    double chi = 0.0;
    double p_pp_chi = 0.0;
    double p_pp_3chi = 0.0;
    double E_chi = 0.0;
    double E_3chi = 0.0;
    double B = 0.0;
    double S = 0.0;
    std::size_t cutoff = 0;
    std::string provenance;
    double B_literal_angles = 0.0;
    double S_literal_angles = 0.0;
    std::vector<std::string> diagnostics;
};

BellReport bell_report(const CoefficientVector& v, double chi, const std::string& provenance,
                       const BellAngles& angles = {});

struct QuadratureGrid {
    double x_max = 12.0;
    std::size_t panels = 48;
    std::size_t order = 16;
    /// Quadrature convention x → s·x; sign statistics must not depend on it.
    double scale = 1.0;
};

/// Direct 2-D integration of |Σ c_n e^{inχ} ψ_n(x) ψ_n(y)|² over the positive quadrant.
double p_plus_plus_quadrature_oracle(const CoefficientVector& v, double chi, const QuadratureGrid& grid = {});

}  // namespace hbell
