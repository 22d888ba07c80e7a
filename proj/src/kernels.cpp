#include "hbell/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#ifdef HBELL_HAVE_OPENMP
#include <omp.h>
#endif

namespace hbell::kernels {

namespace {

// Rows of C(n,r)/2^n by Pascal's rule with halving; exact up to rounding and
// free of factorial overflow.
std::vector<std::vector<double>> halved_pascal(std::size_t rows) {
    std::vector<std::vector<double>> t(rows);
    if (rows == 0) return t;
    t[0] = {1.0};
    for (std::size_t n = 1; n < rows; ++n) {
        t[n].assign(n + 1, 0.0);
        for (std::size_t r = 0; r <= n; ++r) {
            const double left = r > 0 ? t[n - 1][r - 1] : 0.0;
            const double right = r < n ? t[n - 1][r] : 0.0;
            t[n][r] = 0.5 * (left + right);
        }
    }
    return t;
}

double convolution_term(std::span<const double> c, const std::vector<double>& row, std::size_t n) {
    const std::size_t len = c.size();
    const std::size_t r_lo = n >= len ? n - len + 1 : 0;
    const std::size_t r_hi = std::min(n, len - 1);
    double s = 0.0;
    for (std::size_t r = r_lo; r <= r_hi; ++r) s += row[r] * c[r] * c[n - r];
    return s;
}

struct AxisLayout {
    std::array<std::size_t, 4> strides;
    std::array<std::size_t, 2> spectators;
};

AxisLayout layout(const std::array<std::size_t, 4>& dims, std::size_t ax, std::size_t ay) {
    AxisLayout l{};
    l.strides[3] = 1;
    for (int i = 2; i >= 0; --i) l.strides[i] = l.strides[i + 1] * dims[i + 1];
    std::size_t k = 0;
    for (std::size_t i = 0; i < 4; ++i)
        if (i != ax && i != ay) l.spectators[k++] = i;
    return l;
}

// Transforms one (x, y) slice at base offset `base` from `in` into `out`.
void transform_slice(std::span<const cplx> in, std::span<cplx> out, std::size_t base, std::size_t dx,
                     std::size_t dy, std::size_t sx, std::size_t sy, const BlockUnitary& u) {
    const std::size_t top = std::min(dx + dy - 2, u.max_total());
    for (std::size_t total = 0; total <= top; ++total) {
        const auto& blk = u.blocks[total];
        const std::size_t lo = total >= dy ? total - dy + 1 : 0;
        const std::size_t hi = std::min(total, dx - 1);
        for (std::size_t j = lo; j <= hi; ++j) {
            cplx acc{};
            for (std::size_t m = lo; m <= hi; ++m) {
                acc += blk[j * (total + 1) + m] * in[base + m * sx + (total - m) * sy];
            }
            out[base + j * sx + (total - j) * sy] = acc;
        }
    }
}

double quadratic_row(std::span<const double> c, std::span<const double> g, std::size_t levels, std::size_t n,
                     double chi, int parity_sign) {
    double row = 0.0;
    for (std::size_t m = 0; m < levels; ++m) {
        const double gnm = g[n * levels + m];
        if (gnm == 0.0) continue;
        const double sign = (parity_sign < 0 && ((n + m) & 1U)) ? -1.0 : 1.0;
        const double dn = static_cast<double>(n) - static_cast<double>(m);
        row += sign * c[m] * std::cos(dn * chi) * gnm * gnm;
    }
    return c[n] * row;
}

double quadrant_row(std::span<const double> c, double chi, std::span<const double> psi, std::span<const double> w,
                    std::size_t i) {
    const std::size_t levels = c.size();
    const std::size_t nodes = w.size();
    // a_n = c_n e^{inχ} ψ_n(x_i); the y sum is then |Σ_n a_n ψ_n(y_j)|².
    std::vector<double> ar(levels), ai(levels);
    for (std::size_t n = 0; n < levels; ++n) {
        const double v = c[n] * psi[i * levels + n];
        ar[n] = v * std::cos(static_cast<double>(n) * chi);
        ai[n] = v * std::sin(static_cast<double>(n) * chi);
    }
    double row = 0.0;
    for (std::size_t j = 0; j < nodes; ++j) {
        double re = 0.0, im = 0.0;
        const double* pj = &psi[j * levels];
        for (std::size_t n = 0; n < levels; ++n) {
            re += ar[n] * pj[n];
            im += ai[n] * pj[n];
        }
        row += w[j] * (re * re + im * im);
    }
    return w[i] * row;
}

}  // namespace

void hermite_functions(double x, std::span<double> out) noexcept {
    if (out.empty()) return;
    out[0] = std::exp(-0.5 * x * x) / std::sqrt(std::sqrt(std::numbers::pi));
    if (out.size() == 1) return;
    out[1] = std::numbers::sqrt2 * x * out[0];
    for (std::size_t n = 1; n + 1 < out.size(); ++n) {
        const double nd = static_cast<double>(n);
        out[n + 1] = std::sqrt(2.0 / (nd + 1.0)) * x * out[n] - std::sqrt(nd / (nd + 1.0)) * out[n - 1];
    }
}

std::vector<double> hermite_table(std::span<const double> xs, std::size_t n_max, double scale) {
    const std::size_t levels = n_max + 1;
    std::vector<double> t(xs.size() * levels);
    const double amp = 1.0 / std::sqrt(scale);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(xs.size()); ++i) {
        std::span<double> row(&t[i * levels], levels);
        hermite_functions(xs[i] / scale, row);
        if (scale != 1.0)
            for (double& v : row) v *= amp;
    }
    return t;
}

std::vector<double> cumulative_pair_integrals(std::span<const double> psi, std::size_t levels, std::size_t nodes,
                                              double dx) {
    const std::size_t np = packed_size(levels);
    std::vector<double> cum(nodes * np, 0.0);
    for (std::size_t g = 1; g < nodes; ++g) {
        const double* p0 = &psi[(g - 1) * levels];
        const double* p1 = &psi[g * levels];
        const double* prev = &cum[(g - 1) * np];
        double* cur = &cum[g * np];
        std::size_t p = 0;
        for (std::size_t n = 0; n < levels; ++n)
            for (std::size_t m = n; m < levels; ++m, ++p)
                cur[p] = prev[p] + 0.5 * dx * (p0[n] * p0[m] + p1[n] * p1[m]);
    }
    return cum;
}

int max_threads() noexcept {
#ifdef HBELL_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// ---------------------------------------------------------------------------
namespace serial {

std::vector<double> binomial_convolution(std::span<const double> c, std::size_t out_size) {
    const auto pascal = halved_pascal(out_size);
    std::vector<double> out(out_size, 0.0);
    for (std::size_t n = 0; n < out_size; ++n) out[n] = convolution_term(c, pascal[n], n);
    return out;
}

std::vector<cplx> apply_mode_pair(std::span<const cplx> data, const std::array<std::size_t, 4>& dims,
                                  std::size_t ax, std::size_t ay, const BlockUnitary& u) {
    const auto l = layout(dims, ax, ay);
    std::vector<cplx> out(data.size());
    const std::size_t s0 = l.spectators[0], s1 = l.spectators[1];
    for (std::size_t p = 0; p < dims[s0]; ++p)
        for (std::size_t q = 0; q < dims[s1]; ++q)
            transform_slice(data, out, p * l.strides[s0] + q * l.strides[s1], dims[ax], dims[ay], l.strides[ax],
                            l.strides[ay], u);
    return out;
}

std::vector<double> overlap_quadrature(std::span<const double> psi, std::span<const double> w, std::size_t levels) {
    std::vector<double> g(levels * levels, 0.0);
    for (std::size_t n = 0; n < levels; ++n)
        for (std::size_t m = n; m < levels; ++m) {
            double s = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * psi[i * levels + n] * psi[i * levels + m];
            g[n * levels + m] = g[m * levels + n] = s;
        }
    return g;
}

double bell_quadratic_form(std::span<const double> c, std::span<const double> g, std::size_t levels, double chi,
                           int parity_sign) {
    double s = 0.0;
    for (std::size_t n = 0; n < levels; ++n) s += quadratic_row(c, g, levels, n, chi, parity_sign);
    return s;
}

double quadrant_integral(std::span<const double> c, double chi, std::span<const double> psi,
                         std::span<const double> w) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += quadrant_row(c, chi, psi, w, i);
    return s;
}

}  // namespace serial

// ---------------------------------------------------------------------------
namespace omp {

std::vector<double> binomial_convolution(std::span<const double> c, std::size_t out_size) {
    const auto pascal = halved_pascal(out_size);
    std::vector<double> out(out_size, 0.0);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t n = 0; n < static_cast<std::ptrdiff_t>(out_size); ++n)
        out[n] = convolution_term(c, pascal[n], static_cast<std::size_t>(n));
    return out;
}

std::vector<cplx> apply_mode_pair(std::span<const cplx> data, const std::array<std::size_t, 4>& dims,
                                  std::size_t ax, std::size_t ay, const BlockUnitary& u) {
    const auto l = layout(dims, ax, ay);
    std::vector<cplx> out(data.size());
    const std::size_t s0 = l.spectators[0], s1 = l.spectators[1];
    const auto n0 = static_cast<std::ptrdiff_t>(dims[s0]);
    const auto n1 = static_cast<std::ptrdiff_t>(dims[s1]);
#pragma omp parallel for collapse(2) schedule(static)
    for (std::ptrdiff_t p = 0; p < n0; ++p)
        for (std::ptrdiff_t q = 0; q < n1; ++q)
            transform_slice(data, out, p * l.strides[s0] + q * l.strides[s1], dims[ax], dims[ay], l.strides[ax],
                            l.strides[ay], u);
    return out;
}

std::vector<double> overlap_quadrature(std::span<const double> psi, std::span<const double> w, std::size_t levels) {
    std::vector<double> g(levels * levels, 0.0);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t n = 0; n < static_cast<std::ptrdiff_t>(levels); ++n)
        for (std::size_t m = n; m < levels; ++m) {
            double s = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * psi[i * levels + n] * psi[i * levels + m];
            g[n * levels + m] = s;
        }
    for (std::size_t n = 0; n < levels; ++n)
        for (std::size_t m = 0; m < n; ++m) g[n * levels + m] = g[m * levels + n];
    return g;
}

double bell_quadratic_form(std::span<const double> c, std::span<const double> g, std::size_t levels, double chi,
                           int parity_sign) {
    std::vector<double> rows(levels);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t n = 0; n < static_cast<std::ptrdiff_t>(levels); ++n)
        rows[n] = quadratic_row(c, g, levels, static_cast<std::size_t>(n), chi, parity_sign);
    return std::accumulate(rows.begin(), rows.end(), 0.0);
}

double quadrant_integral(std::span<const double> c, double chi, std::span<const double> psi,
                         std::span<const double> w) {
    std::vector<double> rows(w.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(w.size()); ++i)
        rows[i] = quadrant_row(c, chi, psi, w, static_cast<std::size_t>(i));
    return std::accumulate(rows.begin(), rows.end(), 0.0);
}

}  // namespace omp

}  // namespace hbell::kernels
