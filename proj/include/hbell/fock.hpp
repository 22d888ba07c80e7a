#pragma once

// Truncated Fock-space containers shared by every module.
//
// All types here are immutable once constructed. Builders assemble a plain
// std::vector and hand it to the constructor, which validates invariants.

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hbell {

using cplx = std::complex<double>;

/// |Σc² − 1| allowed for a vector flagged as normalized.
inline constexpr double kNormTolerance = 1e-10;
/// c_N² below this marks a truncated vector as converged.
inline constexpr double kTailTolerance = 1e-12;

/// Real amplitudes c_0..c_N of the photon-number-correlated state Σ c_n |n,n>.
class CoefficientVector {
public:
    /// Vacuum at cutoff 0.
    CoefficientVector();
    /// The normalized flag is derived from the data (|Σc² − 1| <= kNormTolerance).
    explicit CoefficientVector(std::vector<double> coeffs);

    static CoefficientVector vacuum(std::size_t cutoff);

    std::size_t cutoff() const noexcept { return coeffs_.size() - 1; }
    std::size_t size() const noexcept { return coeffs_.size(); }
    std::span<const double> coeffs() const noexcept { return coeffs_; }
    double operator[](std::size_t n) const { return coeffs_.at(n); }
    bool normalized() const noexcept { return normalized_; }

    /// c_N², the mass sitting on the top retained level.
    double tail_mass() const noexcept { return coeffs_.back() * coeffs_.back(); }
    bool converged(double tail_tolerance = kTailTolerance) const noexcept {
        return tail_mass() < tail_tolerance;
    }

    /// Zero-pads or drops levels; never renormalizes.
    CoefficientVector resized(std::size_t cutoff) const;

    friend bool operator==(const CoefficientVector&, const CoefficientVector&) = default;

private:
    std::vector<double> coeffs_;
    bool normalized_ = true;
};

double norm_squared(const CoefficientVector& v);

/// Unit-norm copy with the first nonzero coefficient made nonnegative.
/// Throws hbell::Error on a zero vector (an impossible conditioning branch).
CoefficientVector normalize(const CoefficientVector& v);

/// Dense amplitudes Ψ_{jk} of a general two-mode pure state, row-major in
/// (mode a, mode b). Possibly sub-normalized.
class TwoModeAmplitudeMatrix {
public:
    TwoModeAmplitudeMatrix(std::size_t cutoff_a, std::size_t cutoff_b, std::vector<cplx> amps);

    static TwoModeAmplitudeMatrix zeros(std::size_t cutoff_a, std::size_t cutoff_b);
    /// Embeds Σ c_n |n,n> as the diagonal.
    static TwoModeAmplitudeMatrix from_diagonal(const CoefficientVector& v);

    std::size_t cutoff_a() const noexcept { return rows_ - 1; }
    std::size_t cutoff_b() const noexcept { return cols_ - 1; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const cplx& operator()(std::size_t j, std::size_t k) const { return amps_[j * cols_ + k]; }
    std::span<const cplx> data() const noexcept { return amps_; }

    double norm_squared() const noexcept;
    /// Real parts of Ψ_{nn}, n <= min(cutoffs).
    CoefficientVector diagonal() const;
    /// Largest |Ψ_{jk}| with j != k.
    double off_diagonal_max() const noexcept;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<cplx> amps_;
};

/// Rank-4 amplitude tensor over modes (a, b, c, d), row-major.
class FourModeTensor {
public:
    using Dims = std::array<std::size_t, 4>;

    FourModeTensor(Dims dims, std::vector<cplx> amps);

    /// |ψ_ab> ⊗ |φ_cd>.
    static FourModeTensor product(const TwoModeAmplitudeMatrix& ab, const TwoModeAmplitudeMatrix& cd);

    const Dims& dims() const noexcept { return dims_; }
    std::size_t cutoff(std::size_t mode) const { return dims_.at(mode) - 1; }
    std::size_t index(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const noexcept {
        return ((a * dims_[1] + b) * dims_[2] + c) * dims_[3] + d;
    }
    const cplx& operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
        return amps_[index(a, b, c, d)];
    }
    std::span<const cplx> data() const noexcept { return amps_; }
    double norm_squared() const noexcept;

private:
    Dims dims_;
    std::vector<cplx> amps_;
};

/// Post-measurement mixture: normalized branch states with weights summing to 1,
/// plus the pre-normalization probability of the heralding pattern.
class ConditionalEnsemble {
public:
    struct Branch {
        double weight;
        TwoModeAmplitudeMatrix state;
        std::vector<std::size_t> outcome;  // detector counts that produced this branch
    };

    /// Builds the ensemble from projected (un-normalized) branches. The squared
    /// norms are the branch probabilities. Zero total probability throws.
    static ConditionalEnsemble from_projections(std::vector<TwoModeAmplitudeMatrix> projected,
                                                std::vector<std::vector<std::size_t>> outcomes);
    /// Single normalized pure state with success probability 1.
    static ConditionalEnsemble pure(const TwoModeAmplitudeMatrix& state);

    const std::vector<Branch>& branches() const noexcept { return branches_; }
    double success_probability() const noexcept { return success_probability_; }
    std::size_t cutoff_a() const { return branches_.front().state.cutoff_a(); }
    std::size_t cutoff_b() const { return branches_.front().state.cutoff_b(); }

private:
    ConditionalEnsemble(std::vector<Branch> branches, double success_probability);

    std::vector<Branch> branches_;
    double success_probability_;
};

/// ½‖ρ − σ‖₁ between two ensembles of equal cutoffs.
double trace_distance(const ConditionalEnsemble& lhs, const ConditionalEnsemble& rhs);

/// ½‖ρ_e − |t><t|‖₁ with t embedded on the diagonal. The target must have
/// the same cutoff as both ensemble modes.
double trace_distance_pure_vs_ensemble(const CoefficientVector& target, const ConditionalEnsemble& e);

}  // namespace hbell
