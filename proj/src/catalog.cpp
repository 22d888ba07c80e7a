#include "hbell/catalog.hpp"

#include "hbell/error.hpp"
#include "hbell/format.hpp"
#include "hbell/state_io.hpp"

#include <cmath>
#include <functional>

namespace hbell {

namespace {

constexpr std::string_view kModule = "state-catalog";

void require_lambda(double lambda) {
    if (!(lambda >= 0.0 && lambda < 1.0)) {
        throw Error(kModule, "squeezing lambda must lie in [0, 1)");
    }
}

std::vector<double> generate(std::size_t cutoff, const std::function<double(std::size_t)>& coeff) {
    std::vector<double> c(cutoff + 1);
    for (std::size_t n = 0; n <= cutoff; ++n) c[n] = coeff(n);
    return c;
}

std::size_t auto_cutoff(const std::function<double(std::size_t)>& coeff) {
    for (std::size_t n = 1; n <= kMaxAutoCutoff; ++n) {
        const double c = coeff(n);
        if (c * c < kTailTolerance) return n;
    }
    return kMaxAutoCutoff;
}

}  // namespace

CoefficientVector tmss(double lambda, std::size_t cutoff) {
    require_lambda(lambda);
    const double c0 = std::sqrt(1.0 - lambda * lambda);
    return CoefficientVector(generate(cutoff, [&](std::size_t n) { return c0 * std::pow(lambda, n); }));
}

double bessel_i0(double x) {
    // I₀(x) = Σ_k (x²/4)^k / (k!)², term_{k+1} = term_k · (x²/4) / (k+1)².
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

CoefficientVector circle(double r, std::size_t cutoff) {
    if (!(r >= 0.0)) {
        throw Error(kModule, "circle-state radius must be nonnegative");
    }
    const double log_norm = 0.5 * std::log(bessel_i0(2.0 * r * r));
    return CoefficientVector(generate(cutoff, [&](std::size_t n) {
        if (n == 0) return std::exp(-log_norm);
        if (r == 0.0) return 0.0;
        const double nd = static_cast<double>(n);
        return std::exp(2.0 * nd * std::log(r) - std::lgamma(nd + 1.0) - log_norm);
    }));
}

CoefficientVector ps_tmss(double lambda, std::size_t cutoff) {
    require_lambda(lambda);
    const double l2 = lambda * lambda;
    const double pref = std::sqrt((1.0 - l2) * (1.0 - l2) * (1.0 - l2) / (1.0 + l2));
    return CoefficientVector(generate(cutoff, [&](std::size_t n) {
        return pref * static_cast<double>(n + 1) * std::pow(lambda, n);
    }));
}

CoefficientVector seed(double xi, std::size_t cutoff) {
    if (!(xi >= 0.0)) {
        throw Error(kModule, "seed parameter xi must be nonnegative");
    }
    std::vector<double> c(std::max<std::size_t>(cutoff, 1) + 1, 0.0);
    const double norm = std::sqrt(1.0 + xi * xi);
    c[0] = 1.0 / norm;
    c[1] = xi / norm;
    c.resize(cutoff + 1);
    return CoefficientVector(std::move(c));
}

double seed_transmissivity(double xi, double lambda) {
    if (!(lambda > 0.0)) {
        throw Error(kModule, "seed transmissivity is singular at lambda = 0");
    }
    return std::abs(xi - std::sqrt(xi * xi + 8.0 * lambda * lambda)) / (4.0 * lambda);
}

double squeezing_from_lambda(double lambda) {
    require_lambda(lambda);
    return std::atanh(lambda);
}

double lambda_from_squeezing(double s) { return std::tanh(s); }

std::string family_name(Family f) {
    switch (f) {
        case Family::Tmss: return "tmss";
        case Family::Circle: return "circle";
        case Family::PhotonSubtractedTmss: return "ps_tmss";
        case Family::Seed: return "seed";
        case Family::Custom: return "custom";
    }
    return "unknown";
}

Family parse_family(const std::string& name) {
    if (name == "tmss") return Family::Tmss;
    if (name == "circle") return Family::Circle;
    if (name == "ps-tmss" || name == "ps_tmss") return Family::PhotonSubtractedTmss;
    if (name == "seed") return Family::Seed;
    if (name == "custom") return Family::Custom;
    throw Error(kModule, "unknown state family '" + name + "'");
}

std::string provenance(const CatalogSpec& spec) {
    if (spec.family == Family::Custom) return "custom(" + spec.path + ")";
    return family_name(spec.family) + "(" + format_shortest(spec.parameter) + ")";
}

CatalogState make_state(const CatalogSpec& spec) {
    if (spec.family == Family::Custom) {
        auto file = read_state_file(spec.path);
        CoefficientVector v = spec.cutoff ? file.state.resized(*spec.cutoff) : file.state;
        CatalogState out{v, 0.0, file.provenance.empty() ? provenance(spec) : file.provenance, {}};
        if (!v.converged()) out.warnings.push_back("custom state: top level mass above tail tolerance");
        return out;
    }

    std::function<CoefficientVector(std::size_t)> make;
    switch (spec.family) {
        case Family::Tmss: make = [&](std::size_t n) { return tmss(spec.parameter, n); }; break;
        case Family::Circle: make = [&](std::size_t n) { return circle(spec.parameter, n); }; break;
        case Family::PhotonSubtractedTmss: make = [&](std::size_t n) { return ps_tmss(spec.parameter, n); }; break;
        case Family::Seed: make = [&](std::size_t n) { return seed(spec.parameter, n); }; break;
        case Family::Custom: break;
    }
    std::size_t cutoff = 0;
    if (spec.cutoff) {
        cutoff = *spec.cutoff;
    } else {
        const auto probe = make(kMaxAutoCutoff);
        cutoff = auto_cutoff([&](std::size_t n) { return probe[n]; });
    }
    CatalogState out{make(cutoff), 0.0, provenance(spec), {}};
    out.tail_mass = std::max(0.0, 1.0 - norm_squared(out.state));
    if (!out.state.converged()) {
        out.warnings.push_back(provenance(spec) + ": truncated at cutoff " + std::to_string(cutoff) +
                               " with top-level mass " + format_number(out.state.tail_mass(), 6) +
                               " (tail mass " + format_number(out.tail_mass, 6) + ")");
    }
    return out;
}

}  // namespace hbell
