#include "hbell/pipeline.hpp"

#include "hbell/bell.hpp"
#include "hbell/catalog.hpp"
#include "hbell/error.hpp"
#include "hbell/format.hpp"
#include "hbell/kernels.hpp"

#include <cmath>
#include <numbers>

namespace hbell {

namespace {

constexpr std::string_view kModule = "pipeline";

}  // namespace

void PipelineConfig::validate() const {
    if (!std::isfinite(xi) || xi <= 0.0) throw Error(kModule, "xi must be positive");
    if (iterations < 0) throw Error(kModule, "iteration count must be nonnegative");
    if (cutoff < 1) throw Error(kModule, "final cutoff must be at least 1");
    if (cutoff > kMaxAutoCutoff) throw Error(kModule, "final cutoff above " + std::to_string(kMaxAutoCutoff));
    if (lambda && !(*lambda > 0.0 && *lambda < 1.0)) throw Error(kModule, "lambda must lie in (0, 1)");
    if (stage1_cutoff < 4) throw Error(kModule, "stage-1 cutoff must be at least 4");
    if (subtraction == SubtractionMode::BeamSplitter && !(reflectivity > 0.0 && reflectivity < 0.5)) {
        throw Error(kModule, "subtraction reflectivity must lie in (0, 0.5)");
    }
}

BeamSplitter stage1_beam_splitter(double xi, double lambda) {
    const double tf = seed_transmissivity(xi, lambda);
    if (tf >= 1.0) throw Error(kModule, "no stage-1 beam splitter for this xi and lambda");
    const double t = std::sqrt((1.0 - tf) / 2.0);
    return {t, cplx(0.0, std::sqrt(1.0 - t * t))};
}

Stage1Result stage1_verify(double xi, double lambda, std::size_t cutoff) {
    if (cutoff < 4) throw Error(kModule, "stage-1 cutoff must be at least 4");
    const auto bs = stage1_beam_splitter(xi, lambda);
    const auto source = TwoModeAmplitudeMatrix::from_diagonal(tmss(lambda, cutoff));
    const auto mixed = apply_bs_pair_on_four_modes(bs, FourModeTensor::product(source, source));
    auto ensemble = condition_on_outcome(mixed.value, {DetectorOutcome::click(), DetectorOutcome::click()});
    const double p = outcome_probability(mixed.value, {DetectorOutcome::click(), DetectorOutcome::click()});
    const double d = trace_distance_pure_vs_ensemble(seed(xi, cutoff), ensemble);
    return {std::move(ensemble), d, p, bs, mixed.warnings};
}

std::vector<double> gaussify_coefficients(std::span<const double> c, std::size_t out_size) {
    return kernels::omp::binomial_convolution(c, out_size);
}

GaussifyResult gaussify_step(const CoefficientVector& v, std::size_t max_cutoff) {
    if (!v.normalized()) throw Error(kModule, "Gaussification needs a normalized input");
    const auto full = gaussify_coefficients(v.coeffs(), 2 * v.cutoff() + 1);
    double p = 0.0;
    for (double x : full) p += x * x;
    if (!(p > 0.0)) throw Error(kModule, "Gaussification branch has zero probability");

    GaussifyResult r{CoefficientVector(), p, 0.0, {}};
    std::vector<double> kept(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(std::min(full.size(), max_cutoff + 1)));
    double kept_mass = 0.0;
    for (double x : kept) kept_mass += x * x;
    r.tail_mass = 1.0 - kept_mass / p;
    if (r.tail_mass > kTailTolerance) {
        r.warnings.push_back("truncation to cutoff " + std::to_string(max_cutoff) + " drops relative mass " +
                             format_number(r.tail_mass, 3));
    }
    r.state = normalize(CoefficientVector(std::move(kept)));
    return r;
}

TwoModeAmplitudeMatrix gaussify_step_operator(const CoefficientVector& v) {
    const std::size_t n = 2 * v.cutoff();
    const auto copy = TwoModeAmplitudeMatrix::from_diagonal(v.resized(n));
    const auto mixed = apply_bs_pair_on_four_modes(BeamSplitter::balanced(), FourModeTensor::product(copy, copy));
    const std::size_t dim = n + 1;
    std::vector<cplx> out(dim * dim);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b) out[a * dim + b] = mixed.value(a, b, 0, 0);
    return {n, n, std::move(out)};
}

std::string PipelineReport::provenance() const {
    std::string s = "pipeline(xi=" + format_shortest(config.xi) + ", iterations=" + std::to_string(config.iterations) +
                    ", subtraction=" + (config.subtraction == SubtractionMode::Exact ? "exact" : "beamsplitter");
    if (config.subtraction == SubtractionMode::BeamSplitter) s += ", r=" + format_shortest(config.reflectivity);
    return s + ")";
}

PipelineReport run_pipeline(const PipelineConfig& cfg) {
    cfg.validate();
    PipelineReport rep;
    rep.config = cfg;

    if (cfg.lambda) {
        const auto s1 = stage1_verify(cfg.xi, *cfg.lambda, cfg.stage1_cutoff);
        rep.stage1 = Stage1Summary{*cfg.lambda, seed_transmissivity(cfg.xi, *cfg.lambda), s1.trace_distance,
                                   s1.success_probability};
        rep.total_success_probability *= s1.success_probability;
        for (const auto& w : s1.warnings) rep.warnings.push_back("stage 1: " + w);
    }

    CoefficientVector state = seed(cfg.xi, 1);
    rep.stages.push_back({"seed", state, std::nullopt, 0.0});

    // One spare level so the subtracted state still fills the final cutoff.
    const std::size_t cap = cfg.cutoff + 1;
    for (int i = 1; i <= cfg.iterations; ++i) {
        auto g = gaussify_step(state, cap);
        for (const auto& w : g.warnings) rep.warnings.push_back("gaussification " + std::to_string(i) + ": " + w);
        rep.total_success_probability *= g.success_probability;
        state = g.state;
        rep.stages.push_back({"gaussification " + std::to_string(i), state, g.success_probability, g.tail_mass});
    }

    if (cfg.subtraction == SubtractionMode::Exact) {
        state = photon_subtract_exact(state);
        rep.stages.push_back({"subtraction", state, std::nullopt, 0.0});
    } else {
        const auto s = photon_subtract_beamsplitter(state, cfg.reflectivity);
        rep.total_success_probability *= s.success_probability;
        state = s.state;
        rep.stages.push_back({"subtraction", state, s.success_probability, 0.0});
    }
    auto& last = rep.stages.back();
    last.state = last.state.resized(cfg.cutoff);
    if (!last.state.normalized()) {
        last.state = normalize(last.state);
    }
    if (!last.state.converged()) {
        rep.warnings.push_back("final state has top-level mass " + format_number(last.state.tail_mass(), 3) +
                               " at cutoff " + std::to_string(cfg.cutoff));
    }
    return rep;
}

std::vector<ScanRow> overgaussification_scan(double xi, int max_iterations, std::size_t cutoff) {
    if (max_iterations < 0) throw Error(kModule, "iteration count must be nonnegative");
    const BellEvaluator ev(cutoff);
    const double chi = std::numbers::pi / 4;
    std::vector<ScanRow> rows;
    CoefficientVector state = seed(xi, 1);
    for (int i = 0; i <= max_iterations; ++i) {
        if (i > 0) state = gaussify_step(state, cutoff + 1).state;
        const auto sub = normalize(photon_subtract_exact(state).resized(cutoff));
        rows.push_back({i, ev.chsh(sub, chi), ev.ch(sub, chi)});
    }
    return rows;
}

}  // namespace hbell
