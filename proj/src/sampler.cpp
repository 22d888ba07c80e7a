#include "hbell/sampler.hpp"

#include "hbell/error.hpp"
#include "hbell/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace hbell {

namespace {

constexpr std::string_view kModule = "homodyne-sampler";

// Smallest g with cum(g) >= target, then linear interpolation inside cell g−1..g.
template <class F>
double invert(F cum, std::size_t nodes, double target, double dx) {
    std::size_t lo = 0, hi = nodes - 1;
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (cum(mid) < target) lo = mid;
        else hi = mid;
    }
    const double f0 = cum(lo), f1 = cum(hi);
    const double frac = f1 > f0 ? std::clamp((target - f0) / (f1 - f0), 0.0, 1.0) : 0.5;
    return -kSamplerXMax + (static_cast<double>(lo) + frac) * dx;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t counter) noexcept {
    std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t counter) noexcept {
    return static_cast<double>(splitmix64(seed, counter) >> 11) * 0x1.0p-53;
}

double SampleBatch::frequency(int sign_a, int sign_b) const {
    if (n_samples == 0) return 0.0;
    return static_cast<double>(counts[sign_a > 0 ? 0 : 1][sign_b > 0 ? 0 : 1]) / static_cast<double>(n_samples);
}

double SampleBatch::correlation() const {
    return frequency(+1, +1) + frequency(-1, -1) - frequency(+1, -1) - frequency(-1, +1);
}

JointSampler::JointSampler(const CoefficientVector& v) {
    if (!v.normalized()) throw Error(kModule, "sampling needs a normalized state");
    c_.assign(v.coeffs().begin(), v.coeffs().end());
    while (c_.size() > 1 && std::abs(c_.back()) < 1e-15) c_.pop_back();
    levels_ = c_.size();
    pairs_ = kernels::packed_size(levels_);

    const std::size_t nodes = kSamplerCells + 1;
    dx_ = 2.0 * kSamplerXMax / static_cast<double>(kSamplerCells);
    std::vector<double> xs(nodes);
    for (std::size_t g = 0; g < nodes; ++g) xs[g] = -kSamplerXMax + static_cast<double>(g) * dx_;
    xs[kSamplerCells / 2] = 0.0;
    const auto psi = kernels::hermite_table(xs, levels_ - 1);
    cum_pairs_ = kernels::cumulative_pair_integrals(psi, levels_, nodes, dx_);

    cdf_a_.assign(nodes, 0.0);
    for (std::size_t g = 0; g < nodes; ++g) {
        const double* row = &cum_pairs_[g * pairs_];
        double s = 0.0;
        std::size_t p = 0;
        for (std::size_t n = 0; n < levels_; ++n) {
            s += c_[n] * c_[n] * row[p];
            p += levels_ - n;
        }
        cdf_a_[g] = s;
    }
}

RawSample JointSampler::draw(double chi, std::uint64_t seed, std::size_t i, std::vector<double>& psi,
                             std::vector<double>& w) const {
    const std::size_t nodes = kSamplerCells + 1;
    const double ua = uniform01(seed, 2 * static_cast<std::uint64_t>(i));
    const double ub = uniform01(seed, 2 * static_cast<std::uint64_t>(i) + 1);

    const double xa = invert([&](std::size_t g) { return cdf_a_[g]; }, nodes, ua * cdf_a_.back(), dx_);

    kernels::hermite_functions(xa, psi);
    std::size_t p = 0;
    for (std::size_t n = 0; n < levels_; ++n)
        for (std::size_t m = n; m < levels_; ++m, ++p) {
            const double k = n == m ? 1.0 : 2.0 * std::cos((static_cast<double>(m) - static_cast<double>(n)) * chi);
            w[p] = k * c_[n] * c_[m] * psi[n] * psi[m];
        }
    auto cum_b = [&](std::size_t g) {
        const double* row = &cum_pairs_[g * pairs_];
        double s = 0.0;
        for (std::size_t q = 0; q < pairs_; ++q) s += w[q] * row[q];
        return s;
    };
    const double total = cum_b(nodes - 1);
    if (!(total > 0.0)) return {xa, 0.0};
    return {xa, invert(cum_b, nodes, ub * total, dx_)};
}

SampleBatch JointSampler::sample(double chi, std::size_t n, std::uint64_t seed, Exec exec,
                                 std::vector<RawSample>* raw) const {
    if (n == 0) throw Error(kModule, "sample count must be at least 1");
    SampleBatch b;
    b.seed = seed;
    b.n_samples = n;
    b.theta = chi;
    if (raw) raw->assign(n, {});

    const auto body = [&](std::size_t lo, std::size_t hi, std::array<std::array<std::size_t, 2>, 2>& counts) {
        std::vector<double> psi(levels_), w(pairs_);
        for (std::size_t i = lo; i < hi; ++i) {
            const auto s = draw(chi, seed, i, psi, w);
            ++counts[s.x_a >= 0.0 ? 0 : 1][s.x_b >= 0.0 ? 0 : 1];
            if (raw) (*raw)[i] = s;
        }
    };

    if (exec == Exec::Serial || kernels::max_threads() == 1) {
        body(0, n, b.counts);
        return b;
    }
    const int threads = kernels::max_threads();
    std::vector<std::array<std::array<std::size_t, 2>, 2>> partial(static_cast<std::size_t>(threads));
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int t = 0; t < threads; ++t) {
        const std::size_t lo = n * static_cast<std::size_t>(t) / static_cast<std::size_t>(threads);
        const std::size_t hi = n * static_cast<std::size_t>(t + 1) / static_cast<std::size_t>(threads);
        partial[static_cast<std::size_t>(t)] = {};
        body(lo, hi, partial[static_cast<std::size_t>(t)]);
    }
    for (const auto& c : partial)
        for (int a = 0; a < 2; ++a)
            for (int bb = 0; bb < 2; ++bb) b.counts[a][bb] += c[a][bb];
    return b;
}

SampleBatch sample_joint(const CoefficientVector& v, double chi, std::size_t n, std::uint64_t seed, Exec exec,
                         std::vector<RawSample>* raw) {
    return JointSampler(v).sample(chi, n, seed, exec, raw);
}

std::uint64_t companion_seed(std::uint64_t seed) noexcept { return splitmix64(seed, ~std::uint64_t{0}); }

BellEstimate estimate_B(const JointSampler& s, double chi, std::size_t n, std::uint64_t seed, Exec exec) {
    BellEstimate e{};
    e.batch_chi = s.sample(chi, n, seed, exec);
    e.batch_3chi = s.sample(3.0 * chi, n, companion_seed(seed), exec);
    e.E_chi = e.batch_chi.correlation();
    e.E_3chi = e.batch_3chi.correlation();
    e.B_hat = 3.0 * e.E_chi - e.E_3chi;
    const double nd = static_cast<double>(n);
    e.stderr_B = std::sqrt(9.0 * (1.0 - e.E_chi * e.E_chi) / nd + (1.0 - e.E_3chi * e.E_3chi) / nd);
    return e;
}

BellEstimate estimate_B(const CoefficientVector& v, double chi, std::size_t n, std::uint64_t seed, Exec exec) {
    return estimate_B(JointSampler(v), chi, n, seed, exec);
}

}  // namespace hbell
