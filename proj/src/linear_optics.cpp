#include "hbell/linear_optics.hpp"

#include "hbell/error.hpp"
#include "hbell/format.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hbell {

namespace {

constexpr std::string_view kModule = "linear-optics";

cplx ipow(cplx z, std::size_t e) {
    cplx r{1.0, 0.0};
    for (std::size_t i = 0; i < e; ++i) r *= z;
    return r;
}

double log_factorial(std::size_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double log_binomial(std::size_t n, std::size_t k) { return log_factorial(n) - log_factorial(k) - log_factorial(n - k); }

void add_truncation_warning(std::vector<std::string>& warnings, double discarded, std::string_view what) {
    if (discarded > kTailTolerance) {
        warnings.push_back(std::string(what) + ": discarded mass " + format_number(discarded, 3) +
                           " above the Fock cutoff");
    }
}

}  // namespace

BeamSplitter::BeamSplitter(cplx transmissivity, cplx reflectivity) : T(transmissivity), R(reflectivity) {
    if (std::abs(std::norm(T) + std::norm(R) - 1.0) > 1e-12) {
        throw Error(kModule, "beam splitter requires |T|^2 + |R|^2 = 1");
    }
}

BeamSplitter BeamSplitter::balanced() { return {std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0}; }

BeamSplitter BeamSplitter::from_transmissivity(double t, double reflectivity_phase) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw Error(kModule, "transmissivity must lie in [0, 1]");
    }
    const double r = std::sqrt(std::max(0.0, 1.0 - t * t));
    return {t, std::polar(r, reflectivity_phase)};
}

std::vector<std::size_t> DetectorOutcome::accepted_counts(std::size_t cutoff) const {
    std::vector<std::size_t> out;
    switch (kind) {
        case DetectorKind::Vacuum:
            out.push_back(0);
            break;
        case DetectorKind::Click:
            for (std::size_t k = 1; k <= cutoff; ++k) out.push_back(k);
            break;
        case DetectorKind::ExactCount:
            if (count <= cutoff) out.push_back(count);
            break;
    }
    return out;
}

cplx bs_matrix_element(const BeamSplitter& bs, std::size_t j, std::size_t k, std::size_t m, std::size_t n) {
    if (j + k != m + n) return {};
    // U|m,n> = (T a† − R* b†)^m (R a† + T* b†)^n |0,0> / √(m! n!); pick s photons
    // of a† from the first factor and t = j − s from the second.
    const double log_norm = 0.5 * (log_factorial(j) + log_factorial(k) - log_factorial(m) - log_factorial(n));
    const cplx minus_rc = -std::conj(bs.R);
    const cplx tc = std::conj(bs.T);
    cplx sum{};
    const std::size_t s_lo = j > n ? j - n : 0;
    const std::size_t s_hi = std::min(m, j);
    for (std::size_t s = s_lo; s <= s_hi; ++s) {
        const std::size_t t = j - s;
        const double mag = std::exp(log_binomial(m, s) + log_binomial(n, t) + log_norm);
        sum += mag * ipow(bs.T, s) * ipow(minus_rc, m - s) * ipow(bs.R, t) * ipow(tc, n - t);
    }
    return sum;
}

kernels::BlockUnitary bs_blocks(const BeamSplitter& bs, std::size_t max_total) {
    kernels::BlockUnitary u;
    u.blocks.resize(max_total + 1);
    for (std::size_t total = 0; total <= max_total; ++total) {
        auto& blk = u.blocks[total];
        blk.resize((total + 1) * (total + 1));
        for (std::size_t j = 0; j <= total; ++j)
            for (std::size_t m = 0; m <= total; ++m)
                blk[j * (total + 1) + m] = bs_matrix_element(bs, j, total - j, m, total - m);
    }
    return u;
}

Truncated<TwoModeAmplitudeMatrix> apply_bs_two_mode(const BeamSplitter& bs, const TwoModeAmplitudeMatrix& s) {
    const std::array<std::size_t, 4> dims{s.rows(), s.cols(), 1, 1};
    const auto u = bs_blocks(bs, s.cutoff_a() + s.cutoff_b());
    auto out = kernels::omp::apply_mode_pair(s.data(), dims, 0, 1, u);
    TwoModeAmplitudeMatrix result(s.cutoff_a(), s.cutoff_b(), std::move(out));
    const double discarded = std::max(0.0, s.norm_squared() - result.norm_squared());
    Truncated<TwoModeAmplitudeMatrix> r{std::move(result), discarded, {}};
    add_truncation_warning(r.warnings, discarded, "apply_bs_two_mode");
    return r;
}

Truncated<FourModeTensor> apply_bs_pair_on_four_modes(const BeamSplitter& bs, const FourModeTensor& t,
                                                      ModePairing pairing) {
    const auto& dims = t.dims();
    const std::size_t top = *std::max_element(dims.begin(), dims.end()) * 2 - 2;
    const auto u = bs_blocks(bs, top);
    auto step = kernels::omp::apply_mode_pair(t.data(), dims, pairing.first[0], pairing.first[1], u);
    step = kernels::omp::apply_mode_pair(step, dims, pairing.second[0], pairing.second[1], u);
    FourModeTensor result(dims, std::move(step));
    const double discarded = std::max(0.0, t.norm_squared() - result.norm_squared());
    Truncated<FourModeTensor> r{std::move(result), discarded, {}};
    add_truncation_warning(r.warnings, discarded, "apply_bs_pair_on_four_modes");
    return r;
}

namespace {

struct Projection {
    std::vector<TwoModeAmplitudeMatrix> states;
    std::vector<std::vector<std::size_t>> outcomes;
    double probability = 0.0;
};

Projection project(const FourModeTensor& t, const std::array<DetectorOutcome, 2>& outcomes, DetectedModes det) {
    if (det.first == det.second || det.first > 3 || det.second > 3) {
        throw Error(kModule, "detected modes must be two distinct axes of the four-mode tensor");
    }
    std::array<std::size_t, 2> kept{};
    for (std::size_t i = 0, k = 0; i < 4; ++i)
        if (i != det.first && i != det.second) kept[k++] = i;

    const auto& dims = t.dims();
    std::array<std::size_t, 4> strides{};
    strides[3] = 1;
    for (int i = 2; i >= 0; --i) strides[i] = strides[i + 1] * dims[i + 1];

    Projection proj;
    const auto ks = outcomes[0].accepted_counts(dims[det.first] - 1);
    const auto ls = outcomes[1].accepted_counts(dims[det.second] - 1);
    for (std::size_t k : ks) {
        for (std::size_t l : ls) {
            std::vector<cplx> amps(dims[kept[0]] * dims[kept[1]]);
            const std::size_t base = k * strides[det.first] + l * strides[det.second];
            for (std::size_t x = 0; x < dims[kept[0]]; ++x)
                for (std::size_t y = 0; y < dims[kept[1]]; ++y)
                    amps[x * dims[kept[1]] + y] = t.data()[base + x * strides[kept[0]] + y * strides[kept[1]]];
            TwoModeAmplitudeMatrix m(dims[kept[0]] - 1, dims[kept[1]] - 1, std::move(amps));
            proj.probability += m.norm_squared();
            proj.states.push_back(std::move(m));
            proj.outcomes.push_back({k, l});
        }
    }
    return proj;
}

}  // namespace

double outcome_probability(const FourModeTensor& t, const std::array<DetectorOutcome, 2>& outcomes,
                           DetectedModes detected) {
    return project(t, outcomes, detected).probability;
}

ConditionalEnsemble condition_on_outcome(const FourModeTensor& t, const std::array<DetectorOutcome, 2>& outcomes,
                                         DetectedModes detected) {
    auto proj = project(t, outcomes, detected);
    if (!(proj.probability > 0.0)) {
        throw Error(kModule, "impossible conditioning: outcome pattern has zero probability");
    }
    return ConditionalEnsemble::from_projections(std::move(proj.states), std::move(proj.outcomes));
}

CoefficientVector photon_subtract_exact(const CoefficientVector& v) {
    if (v.cutoff() == 0) {
        throw Error(kModule, "photon subtraction needs support above n = 0");
    }
    std::vector<double> out(v.cutoff());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = static_cast<double>(n + 1) * v[n + 1];
    const CoefficientVector raw(std::move(out));
    if (!(norm_squared(raw) > 0.0)) {
        throw Error(kModule, "photon subtraction of the vacuum has zero probability");
    }
    return normalize(raw);
}

std::vector<double> subtraction_kraus(double r, std::size_t cutoff, Expansion expansion) {
    const std::size_t dim = cutoff + 1;
    std::vector<double> k(dim * dim, 0.0);
    // <n−1|_mode <1|_anc U |n>_mode |0>_anc = −R* √n T^{n−1}. Through O(r²) only
    // the leading −r√n survives: the r² term of the unitary moves 0 or 2
    // photons into the ancilla.
    const double t = std::sqrt(1.0 - r * r);
    for (std::size_t n = 1; n < dim; ++n) {
        const double amp = -r * std::sqrt(static_cast<double>(n));
        k[(n - 1) * dim + n] = expansion == Expansion::Exact ? amp * std::pow(t, static_cast<double>(n - 1)) : amp;
    }
    return k;
}

SubtractionResult photon_subtract_beamsplitter(const CoefficientVector& v, double r, Expansion expansion) {
    if (!(r > 0.0) || r >= 0.5) {
        throw Error(kModule, "subtraction reflectivity must satisfy 0 < r < 0.5 for the expansion to hold");
    }
    const CoefficientVector in = normalize(v);
    const std::size_t dim = in.size();
    const auto k = subtraction_kraus(r, in.cutoff(), expansion);
    // (K ⊗ K) Σ c_n |n,n>
    std::vector<cplx> amps(dim * dim);
    for (std::size_t j = 0; j < dim; ++j)
        for (std::size_t l = 0; l < dim; ++l) {
            double s = 0.0;
            for (std::size_t n = 0; n < dim; ++n) s += k[j * dim + n] * k[l * dim + n] * in[n];
            amps[j * dim + l] = s;
        }
    const TwoModeAmplitudeMatrix out(in.cutoff(), in.cutoff(), std::move(amps));
    const double p = out.norm_squared();
    if (!(p > 0.0)) {
        throw Error(kModule, "impossible conditioning: no photon to subtract");
    }
    const auto diag = out.diagonal().resized(in.cutoff() - 1);
    return {normalize(diag), p};
}

}  // namespace hbell
