#include "hbell/optimizer.hpp"

#include "hbell/bell.hpp"
#include "hbell/error.hpp"
#include "hbell/format.hpp"
#include "hbell/pipeline.hpp"
#include "hbell/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace hbell {

namespace {

constexpr std::string_view kModule = "optimizer";

std::vector<double> unit(std::vector<double> c) {
    double s = 0.0;
    for (double x : c) s += x * x;
    s = std::sqrt(s);
    for (double& x : c) x /= s;
    return c;
}

// Global sign so the first nonzero coefficient is nonnegative.
void canonical_sign(std::vector<double>& c) {
    for (double x : c) {
        if (x == 0.0) continue;
        if (x < 0.0)
            for (double& y : c) y = -y;
        return;
    }
}

void project(std::vector<double>& c, bool nonnegative) {
    if (nonnegative)
        for (double& x : c) x = std::max(x, 0.0);
    double s = 0.0;
    for (double x : c) s += x * x;
    if (!(s > 0.0)) {
        std::fill(c.begin(), c.end(), 0.0);
        c[0] = 1.0;
        return;
    }
    s = std::sqrt(s);
    for (double& x : c) x /= s;
}

std::vector<double> random_start(std::uint64_t seed, std::size_t levels, bool nonnegative) {
    std::vector<double> c(levels);
    for (std::size_t n = 0; n < levels; ++n) {
        // Box–Muller on two counter draws.
        const double u1 = 1.0 - uniform01(seed, 2 * n);
        const double u2 = uniform01(seed, 2 * n + 1);
        c[n] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
    project(c, nonnegative);
    return c;
}

struct Run {
    std::vector<double> c;
    StartLog log;
};

Run ascend(const QuadraticObjective& f, std::vector<double> c, const OptimizationProblem& p, StartLog log) {
    const std::size_t L = f.levels;
    std::vector<double> ac(L), grad(L), trial(L);
    auto apply = [&](const std::vector<double>& x) {
        for (std::size_t i = 0; i < L; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < L; ++j) s += f.a[i * L + j] * x[j];
            ac[i] = s;
        }
    };
    project(c, p.nonnegative);
    double value = f.value(c);
    std::size_t evals = 1;
    log.accepted.push_back(value);
    double step = 0.5;
    while (evals < p.max_evaluations) {
        apply(c);
        double q = 0.0;
        for (std::size_t i = 0; i < L; ++i) q += c[i] * ac[i];
        double gnorm = 0.0;
        for (std::size_t i = 0; i < L; ++i) {
            grad[i] = 2.0 * (ac[i] - q * c[i]);
            gnorm += grad[i] * grad[i];
        }
        if (gnorm < 1e-30) break;

        bool accepted = false;
        double next = value;
        while (evals < p.max_evaluations && step > 1e-14) {
            for (std::size_t i = 0; i < L; ++i) trial[i] = c[i] + step * grad[i];
            project(trial, p.nonnegative);
            next = f.value(trial);
            ++evals;
            if (next >= value) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        c.swap(trial);
        const double gain = next - value;
        value = next;
        log.accepted.push_back(value);
        if (gain < p.tolerance) break;
        step = std::min(step * 2.0, 64.0);
    }
    canonical_sign(c);
    log.value = value;
    log.evaluations = evals;
    return {std::move(c), std::move(log)};
}

ScalarOptimum golden_section(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

ScalarOptimum grid_then_golden(const std::function<double(double)>& f, double lo, double hi, std::size_t grid,
                               bool include_lo = true) {
    grid = std::max<std::size_t>(grid, 3);
    std::vector<double> xs(grid), fs(grid);
    const double h = (hi - lo) / static_cast<double>(grid - 1);
    for (std::size_t i = 0; i < grid; ++i) {
        xs[i] = i == 0 && !include_lo ? lo + 1e-3 * h : lo + static_cast<double>(i) * h;
        fs[i] = f(xs[i]);
    }
    const std::size_t best = static_cast<std::size_t>(std::max_element(fs.begin(), fs.end()) - fs.begin());
    const double a = xs[best == 0 ? 0 : best - 1];
    const double b = xs[best + 1 == grid ? grid - 1 : best + 1];
    auto refined = golden_section(f, a, b, 1e-7);
    if (fs[best] > refined.value) return {xs[best], fs[best]};
    return refined;
}

}  // namespace

std::string objective_name(Objective o) { return o == Objective::Chsh ? "CHSH" : "CH"; }

Objective parse_objective(const std::string& name) {
    std::string s = name;
    for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (s == "chsh") return Objective::Chsh;
    if (s == "ch") return Objective::Ch;
    throw Error(kModule, "unknown objective '" + name + "' (expected chsh or ch)");
}

double QuadraticObjective::value(std::span<const double> c) const {
    double s = 0.0;
    for (std::size_t i = 0; i < levels; ++i) {
        double r = 0.0;
        for (std::size_t j = 0; j < levels; ++j) r += a[i * levels + j] * c[j];
        s += c[i] * r;
    }
    return s + offset;
}

QuadraticObjective quadratic_objective(Objective o, std::size_t n, double chi) {
    const OverlapTable g(n);
    const std::size_t L = n + 1;
    const double w1 = o == Objective::Chsh ? 12.0 : 3.0;
    const double w3 = o == Objective::Chsh ? 4.0 : 1.0;
    QuadraticObjective f{L, std::vector<double>(L * L), o == Objective::Chsh ? -2.0 : 0.0};
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < L; ++j) {
            const double d = static_cast<double>(i) - static_cast<double>(j);
            const double g2 = g(i, j) * g(i, j);
            f.a[i * L + j] = (w1 * std::cos(d * chi) - w3 * std::cos(3.0 * d * chi)) * g2;
        }
    return f;
}

OptimizationResult optimize_coefficients(const OptimizationProblem& p) {
    if (p.n > kMaxOptimizerCutoff) {
        throw Error(kModule, "coefficient optimization supports N <= " + std::to_string(kMaxOptimizerCutoff));
    }
    const auto f = quadratic_objective(p.objective, p.n, p.chi);
    const std::size_t L = p.n + 1;

    std::vector<std::pair<std::vector<double>, StartLog>> inits;
    for (std::size_t k = 0; k < p.starts; ++k) {
        const std::uint64_t s = splitmix64(p.seed, k);
        inits.push_back({random_start(s, L, p.nonnegative), StartLog{"random " + std::to_string(k), s, 0.0, 0, {}}});
    }
    if (p.warm_starts && p.n >= 1) {
        PipelineConfig cfg;
        cfg.cutoff = std::max<std::size_t>(p.n, 1);
        const auto pipe = run_pipeline(cfg).final_state().resized(p.n);
        inits.push_back({std::vector<double>(pipe.coeffs().begin(), pipe.coeffs().end()), StartLog{"pipeline", 0, 0.0, 0, {}}});
        const auto sd = seed(1.0 / std::numbers::sqrt2, p.n);
        inits.push_back({std::vector<double>(sd.coeffs().begin(), sd.coeffs().end()), StartLog{"seed", 0, 0.0, 0, {}}});
    }
    if (inits.empty()) {
        inits.push_back({unit(std::vector<double>(L, 1.0)), StartLog{"uniform", 0, 0.0, 0, {}}});
    }

    std::vector<Run> runs(inits.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(inits.size()); ++k) {
        runs[k] = ascend(f, inits[k].first, p, inits[k].second);
    }

    std::size_t best = 0;
    for (std::size_t k = 1; k < runs.size(); ++k) {
        const double dv = runs[k].log.value - runs[best].log.value;
        if (dv > 1e-12 || (std::abs(dv) <= 1e-12 && runs[k].c < runs[best].c)) best = k;
    }

    OptimizationResult r;
    r.state = normalize(CoefficientVector(runs[best].c));
    const BellEvaluator ev(p.n);
    r.B = ev.chsh(r.state, p.chi);
    r.S = ev.ch(r.state, p.chi);
    r.value = p.objective == Objective::Chsh ? r.B : r.S;
    for (auto& run : runs) r.starts.push_back(std::move(run.log));
    r.provenance = "optimized(" + objective_name(p.objective) + ", N=" + std::to_string(p.n) +
                   ", chi=" + format_shortest(p.chi) + ")";
    return r;
}

std::string parameter_family_name(ParameterFamily f) {
    switch (f) {
        case ParameterFamily::Tmss: return "tmss";
        case ParameterFamily::Circle: return "circle";
        case ParameterFamily::PhotonSubtractedTmss: return "ps-tmss";
        case ParameterFamily::Seed: return "seed";
        case ParameterFamily::PipelineXi: return "pipeline";
    }
    return "?";
}

ParameterFamily parse_parameter_family(const std::string& name) {
    if (name == "pipeline") return ParameterFamily::PipelineXi;
    switch (parse_family(name)) {
        case Family::Tmss: return ParameterFamily::Tmss;
        case Family::Circle: return ParameterFamily::Circle;
        case Family::PhotonSubtractedTmss: return ParameterFamily::PhotonSubtractedTmss;
        case Family::Seed: return ParameterFamily::Seed;
        case Family::Custom: break;
    }
    throw Error(kModule, "family '" + name + "' has no scalar parameter");
}

FamilyRange default_range(ParameterFamily f) {
    switch (f) {
        case ParameterFamily::Circle: return {0.5, 2.0};
        case ParameterFamily::Seed:
        case ParameterFamily::PipelineXi: return {0.1, 3.0};
        default: return {0.01, 0.95};
    }
}

double family_objective(ParameterFamily f, double parameter, double chi, Objective o) {
    CoefficientVector v;
    if (f == ParameterFamily::PipelineXi) {
        PipelineConfig cfg;
        cfg.xi = parameter;
        v = run_pipeline(cfg).final_state();
    } else {
        CatalogSpec spec;
        spec.parameter = parameter;
        switch (f) {
            case ParameterFamily::Tmss: spec.family = Family::Tmss; break;
            case ParameterFamily::Circle: spec.family = Family::Circle; break;
            case ParameterFamily::PhotonSubtractedTmss: spec.family = Family::PhotonSubtractedTmss; break;
            default: spec.family = Family::Seed; break;
        }
        v = normalize(make_state(spec).state);
    }
    return o == Objective::Chsh ? chsh_B(v, chi) : ch_S(v, chi);
}

ScalarOptimum optimize_family_parameter(ParameterFamily f, double chi, Objective o, std::optional<FamilyRange> range,
                                        std::size_t grid) {
    const auto rg = range.value_or(default_range(f));
    if (!(rg.hi > rg.lo)) throw Error(kModule, "empty parameter range");
    return grid_then_golden([&](double x) { return family_objective(f, x, chi, o); }, rg.lo, rg.hi, grid);
}

ScalarOptimum optimize_angle(const CoefficientVector& v, Objective o) {
    const BellEvaluator ev(v.cutoff());
    auto f = [&](double chi) { return o == Objective::Chsh ? ev.chsh(v, chi) : ev.ch(v, chi); };
    const double hi = std::numbers::pi / 2;
    double fmin = f(hi), fmax = fmin;
    for (int i = 1; i < 180; ++i) {
        const double y = f(hi * i / 180.0);
        fmin = std::min(fmin, y);
        fmax = std::max(fmax, y);
    }
    if (fmax - fmin < 1e-12) return {std::numbers::pi / 4, f(std::numbers::pi / 4)};
    return grid_then_golden(f, 0.0, hi, 181, false);
}

}  // namespace hbell
