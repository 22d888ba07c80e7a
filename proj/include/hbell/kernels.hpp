#pragma once

// Data-parallel inner loops. Every kernel exists twice: `serial::` is the
// reference used by tests, `omp::` is the OpenMP version the modules call.
// Both produce bitwise-identical results: parallel loops write disjoint
// outputs, and every reduction is finished serially in a fixed order.

#include "hbell/fock.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace hbell::kernels {

/// Photon-number-conserving two-mode unitary stored per total-photon block:
/// blocks[N] is (N+1)×(N+1) row-major with entry [j][m] = <j, N−j|U|m, N−m>.
struct BlockUnitary {
    std::vector<std::vector<cplx>> blocks;
    std::size_t max_total() const noexcept { return blocks.size() - 1; }
};

/// Normalized Hermite functions ψ_0(x)..ψ_{out.size()-1}(x) by the stable
/// three-term recurrence.
void hermite_functions(double x, std::span<double> out) noexcept;

/// ψ_0(x)..ψ_N(x) for every x in `xs`, row-major [i][n]. `scale` evaluates the
/// rescaled convention ψ_n(x/s)/√s.
std::vector<double> hermite_table(std::span<const double> xs, std::size_t n_max, double scale = 1.0);

/// Cumulative trapezoid integrals ∫_{x_0}^{x_g} ψ_n ψ_m for n <= m, packed as
/// [g][p] with p running over (n, m >= n) row by row. Used by the sampler.
std::vector<double> cumulative_pair_integrals(std::span<const double> psi_table, std::size_t n_levels,
                                              std::size_t n_nodes, double dx);

/// Number of packed (n <= m) pairs for `n_levels` levels.
constexpr std::size_t packed_size(std::size_t n_levels) noexcept { return n_levels * (n_levels + 1) / 2; }

namespace serial {

/// out[n] = 2^{-n} Σ_r C(n,r) c_r c_{n−r} for n < out_size.
std::vector<double> binomial_convolution(std::span<const double> c, std::size_t out_size);

/// Applies `u` to axes (axis_x, axis_y) of a rank-4 tensor. Amplitude that
/// would leave the retained cutoffs is dropped.
std::vector<cplx> apply_mode_pair(std::span<const cplx> data, const std::array<std::size_t, 4>& dims,
                                  std::size_t axis_x, std::size_t axis_y, const BlockUnitary& u);

/// G_{nm} = Σ_i w_i ψ_n(x_i) ψ_m(x_i), row-major (N+1)×(N+1).
std::vector<double> overlap_quadrature(std::span<const double> psi_table, std::span<const double> weights,
                                       std::size_t n_levels);

/// Σ_{nm} c_n c_m cos((n−m)χ) s_{nm} G_{nm}² where s_{nm} = parity_sign^{n+m}.
double bell_quadratic_form(std::span<const double> c, std::span<const double> overlaps, std::size_t n_levels,
                           double chi, int parity_sign);

/// Σ_{ij} w_i w_j |Σ_n c_n e^{inχ} ψ_n(x_i) ψ_n(x_j)|² over a tensor-product grid.
double quadrant_integral(std::span<const double> c, double chi, std::span<const double> psi_table,
                         std::span<const double> weights);

}  // namespace serial

namespace omp {

std::vector<double> binomial_convolution(std::span<const double> c, std::size_t out_size);
std::vector<cplx> apply_mode_pair(std::span<const cplx> data, const std::array<std::size_t, 4>& dims,
                                  std::size_t axis_x, std::size_t axis_y, const BlockUnitary& u);
std::vector<double> overlap_quadrature(std::span<const double> psi_table, std::span<const double> weights,
                                       std::size_t n_levels);
double bell_quadratic_form(std::span<const double> c, std::span<const double> overlaps, std::size_t n_levels,
                           double chi, int parity_sign);
double quadrant_integral(std::span<const double> c, double chi, std::span<const double> psi_table,
                         std::span<const double> weights);

}  // namespace omp

/// Number of OpenMP threads available (1 without OpenMP).
int max_threads() noexcept;

}  // namespace hbell::kernels
