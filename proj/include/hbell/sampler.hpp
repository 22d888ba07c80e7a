#pragma once

// Monte Carlo homodyne records for Σ c_n |n,n>.
//
// x_A is drawn from its marginal Σ c_n² ψ_n(x)², x_B from the conditional
// density given x_A, both by inverse CDF on a uniform grid over [−12, 12]
// with 2^14 cells. Outcomes are binned +1 iff x >= 0.
//
// Random numbers: SplitMix64 used as a counter-based generator. Sample i
// consumes counters 2i and 2i+1, so any partition of the index range across
// threads reproduces the serial draw exactly.

#include "hbell/fock.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace hbell {

inline constexpr double kSamplerXMax = 12.0;
inline constexpr std::size_t kSamplerCells = std::size_t{1} << 14;

/// SplitMix64 output for a given seed and counter.
std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t counter) noexcept;
/// Uniform in [0, 1) from the top 53 bits.
double uniform01(std::uint64_t seed, std::uint64_t counter) noexcept;

struct SampleBatch {
    std::uint64_t seed = 0;
    std::size_t n_samples = 0;
    /// Joint statistics depend on theta + phi only; the batch records theta = chi, phi = 0.
    double theta = 0.0;
    double phi = 0.0;
    /// counts[a][b], index 0 for +1 and 1 for −1.
    std::array<std::array<std::size_t, 2>, 2> counts{};
    std::string generator = "splitmix64";

    double frequency(int sign_a, int sign_b) const;
    double correlation() const;
};

struct RawSample {
    double x_a;
    double x_b;
};

enum class Exec { Serial, Parallel };

/// Precomputed grid tables for one state; reusable across angles and seeds.
class JointSampler {
public:
    explicit JointSampler(const CoefficientVector& v);

    SampleBatch sample(double chi, std::size_t n, std::uint64_t seed, Exec exec = Exec::Parallel,
                       std::vector<RawSample>* raw = nullptr) const;

    std::size_t levels() const noexcept { return levels_; }

private:
    RawSample draw(double chi, std::uint64_t seed, std::size_t i, std::vector<double>& psi,
                   std::vector<double>& w) const;

    std::vector<double> c_;
    std::size_t levels_;
    std::size_t pairs_;
    double dx_;
    std::vector<double> cum_pairs_;  // [g][p]
    std::vector<double> cdf_a_;      // [g]
};

SampleBatch sample_joint(const CoefficientVector& v, double chi, std::size_t n, std::uint64_t seed,
                         Exec exec = Exec::Parallel, std::vector<RawSample>* raw = nullptr);

struct BellEstimate {
    double B_hat;
    double stderr_B;
    double E_chi;
    double E_3chi;
    SampleBatch batch_chi;
    SampleBatch batch_3chi;
};

/// Seed for the 3χ batch derived from the χ batch seed.
std::uint64_t companion_seed(std::uint64_t seed) noexcept;

/// B̂ = 3Ê(χ) − Ê(3χ) from two independent batches of n samples each, with
/// var Ê = (1 − Ê²)/n.
BellEstimate estimate_B(const CoefficientVector& v, double chi, std::size_t n, std::uint64_t seed,
                        Exec exec = Exec::Parallel);
BellEstimate estimate_B(const JointSampler& s, double chi, std::size_t n, std::uint64_t seed,
                        Exec exec = Exec::Parallel);

}  // namespace hbell
