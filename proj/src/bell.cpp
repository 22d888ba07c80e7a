#include "hbell/bell.hpp"

#include "hbell/error.hpp"
#include "hbell/format.hpp"
#include "hbell/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace hbell {

namespace {

constexpr std::string_view kModule = "bell-metrics";

// Nodes and weights on [−1, 1] by Newton iteration on P_order.
void gauss_legendre(std::size_t order, std::vector<double>& x, std::vector<double>& w) {
    x.assign(order, 0.0);
    w.assign(order, 0.0);
    const double n = static_cast<double>(order);
    for (std::size_t i = 0; i < (order + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (std::size_t k = 2; k <= order; ++k) {
                const double kd = static_cast<double>(k);
                const double p2 = ((2.0 * kd - 1.0) * z * p1 - (kd - 1.0) * p0) / kd;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = -z;
        x[order - 1 - i] = z;
        w[i] = w[order - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

double quadrature_x_max(std::size_t cutoff) {
    return std::max(12.0, std::sqrt(2.0 * static_cast<double>(cutoff) + 1.0) + 6.0);
}

}  // namespace

double hermite_wavefunction(std::size_t n, double x) {
    std::vector<double> psi(n + 1);
    kernels::hermite_functions(x, psi);
    return psi[n];
}

QuadratureRule composite_gauss_legendre(double a, double b, std::size_t panels, std::size_t order) {
    if (panels == 0 || order == 0 || !(b > a)) {
        throw Error(kModule, "quadrature needs a nonempty interval, panels and order");
    }
    std::vector<double> gx, gw;
    if (order == 1) {
        gx = {0.0};
        gw = {2.0};
    } else {
        gauss_legendre(order, gx, gw);
    }
    QuadratureRule rule;
    const double h = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = a + (static_cast<double>(p) + 0.5) * h;
        for (std::size_t i = 0; i < order; ++i) {
            rule.nodes.push_back(mid + 0.5 * h * gx[i]);
            rule.weights.push_back(0.5 * h * gw[i]);
        }
    }
    return rule;
}

// ---------------------------------------------------------------------------

OverlapTable::OverlapTable(std::size_t cutoff, OverlapMethod method) : levels_(cutoff + 1) {
    if (method == OverlapMethod::Quadrature) {
        const double x_max = quadrature_x_max(cutoff);
        const auto rule = composite_gauss_legendre(0.0, x_max, static_cast<std::size_t>(std::ceil(4.0 * x_max)), 20);
        const auto psi = kernels::hermite_table(rule.nodes, cutoff);
        g_ = kernels::omp::overlap_quadrature(psi, rule.weights, levels_);
        return;
    }
    // ψ_n ψ_m'' − ψ_m ψ_n'' = 2(n−m) ψ_n ψ_m, so for n ≠ m
    //   G_nm = [ψ_m(0) ψ_n'(0) − ψ_n(0) ψ_m'(0)] / (2(n − m)),
    // with ψ_n' = √(n/2) ψ_{n−1} − √((n+1)/2) ψ_{n+1}.
    std::vector<double> psi0(levels_ + 1);
    kernels::hermite_functions(0.0, psi0);
    std::vector<double> dpsi0(levels_);
    for (std::size_t n = 0; n < levels_; ++n) {
        const double nd = static_cast<double>(n);
        dpsi0[n] = (n > 0 ? std::sqrt(nd / 2.0) * psi0[n - 1] : 0.0) - std::sqrt((nd + 1.0) / 2.0) * psi0[n + 1];
    }
    g_.assign(levels_ * levels_, 0.0);
    for (std::size_t n = 0; n < levels_; ++n) {
        g_[n * levels_ + n] = 0.5;
        for (std::size_t m = n + 1; m < levels_; ++m) {
            if (((n + m) & 1U) == 0) continue;
            const double diff = 2.0 * (static_cast<double>(n) - static_cast<double>(m));
            const double v = (psi0[m] * dpsi0[n] - psi0[n] * dpsi0[m]) / diff;
            g_[n * levels_ + m] = g_[m * levels_ + n] = v;
        }
    }
}

double OverlapTable::invariant_error() const noexcept {
    double err = 0.0;
    for (std::size_t n = 0; n < levels_; ++n) {
        err = std::max(err, std::abs((*this)(n, n) - 0.5));
        for (std::size_t m = 0; m < levels_; ++m) {
            err = std::max(err, std::abs((*this)(n, m) - (*this)(m, n)));
            if (n != m && ((n + m) & 1U) == 0) err = std::max(err, std::abs((*this)(n, m)));
        }
    }
    return err;
}

// ---------------------------------------------------------------------------

BellEvaluator::BellEvaluator(std::size_t cutoff) : table_(cutoff) {}

BellEvaluator::BellEvaluator(OverlapTable table) : table_(std::move(table)) {}

void BellEvaluator::check(const CoefficientVector& v) const {
    if (!v.normalized()) {
        throw Error(kModule, "Bell quantities need a normalized state");
    }
    if (v.cutoff() > table_.cutoff()) {
        throw Error(kModule, "state cutoff exceeds the overlap table");
    }
}

double BellEvaluator::quadrant(const CoefficientVector& v, double chi, int sign_a, int sign_b) const {
    check(v);
    const double p = kernels::omp::bell_quadratic_form(v.coeffs(), table_.data(), table_.levels(), chi,
                                                       sign_a * sign_b);
    return std::clamp(p, 0.0, 1.0);
}

double BellEvaluator::marginal_plus(const CoefficientVector& v, double theta) const {
    return quadrant(v, theta, +1, +1) + quadrant(v, theta, +1, -1);
}

double BellEvaluator::correlation(const CoefficientVector& v, double chi) const {
    const double e = quadrant(v, chi, +1, +1) + quadrant(v, chi, -1, -1) - quadrant(v, chi, +1, -1) -
                     quadrant(v, chi, -1, +1);
    return std::clamp(e, -1.0, 1.0);
}

double BellEvaluator::chsh(const CoefficientVector& v, double chi) const {
    return 3.0 * correlation(v, chi) - correlation(v, 3.0 * chi);
}

double BellEvaluator::ch(const CoefficientVector& v, double chi) const {
    return 3.0 * p_plus_plus(v, chi) - p_plus_plus(v, 3.0 * chi);
}

double BellEvaluator::chsh_literal(const CoefficientVector& v, const BellAngles& a) const {
    return correlation(v, a.theta1 + a.phi1) + correlation(v, a.theta1 + a.phi2) +
           correlation(v, a.theta2 + a.phi1) - correlation(v, a.theta2 + a.phi2);
}

double BellEvaluator::ch_literal(const CoefficientVector& v, const BellAngles& a) const {
    const double num = p_plus_plus(v, a.theta1 + a.phi1) - p_plus_plus(v, a.theta1 + a.phi2) +
                       p_plus_plus(v, a.theta2 + a.phi1) + p_plus_plus(v, a.theta2 + a.phi2);
    return num / (marginal_plus(v, a.theta2) + marginal_plus(v, a.phi1));
}

double p_plus_plus(const CoefficientVector& v, double chi) { return BellEvaluator(v.cutoff()).p_plus_plus(v, chi); }
double marginal_plus(const CoefficientVector& v, double theta) {
    return BellEvaluator(v.cutoff()).marginal_plus(v, theta);
}
double correlation_E(const CoefficientVector& v, double chi) { return BellEvaluator(v.cutoff()).correlation(v, chi); }
double chsh_B(const CoefficientVector& v, double chi) { return BellEvaluator(v.cutoff()).chsh(v, chi); }
double ch_S(const CoefficientVector& v, double chi) { return BellEvaluator(v.cutoff()).ch(v, chi); }

BellReport bell_report(const CoefficientVector& v, double chi, const std::string& provenance,
                       const BellAngles& angles) {
    const BellEvaluator ev(v.cutoff());
    BellReport r;
    r.chi = chi;
    r.p_pp_chi = ev.p_plus_plus(v, chi);
    r.p_pp_3chi = ev.p_plus_plus(v, 3.0 * chi);
    r.E_chi = ev.correlation(v, chi);
    r.E_3chi = ev.correlation(v, 3.0 * chi);
    r.B = 3.0 * r.E_chi - r.E_3chi;
    r.S = 3.0 * r.p_pp_chi - r.p_pp_3chi;
    r.cutoff = v.cutoff();
    r.provenance = provenance;
    r.B_literal_angles = ev.chsh_literal(v, angles);
    r.S_literal_angles = ev.ch_literal(v, angles);
    if (std::abs(r.S - (r.B / 4.0 + 0.5)) > 1e-10) {
        r.diagnostics.push_back("S and B/4 + 1/2 disagree by " + format_number(r.S - (r.B / 4.0 + 0.5), 3));
    }
    if (std::abs(r.S_literal_angles - r.S) > 1e-9) {
        r.diagnostics.push_back("CH ratio at the literal angles (" + format_number(r.S_literal_angles, 12) +
                                ") differs from 3P++(chi) - P++(3chi)");
    }
    if (!v.converged()) {
        r.diagnostics.push_back("state top-level mass " + format_number(v.tail_mass(), 3) +
                                " exceeds the tail tolerance");
    }
    return r;
}

double p_plus_plus_quadrature_oracle(const CoefficientVector& v, double chi, const QuadratureGrid& grid) {
    if (!v.normalized()) {
        throw Error(kModule, "quadrature oracle needs a normalized state");
    }
    const auto rule = composite_gauss_legendre(0.0, grid.scale * grid.x_max, grid.panels, grid.order);
    const auto psi = kernels::hermite_table(rule.nodes, v.cutoff(), grid.scale);
    return kernels::omp::quadrant_integral(v.coeffs(), chi, psi, rule.weights);
}

}  // namespace hbell
