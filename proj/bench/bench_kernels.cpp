// Serial reference vs OpenMP kernels. Arg is the problem size.

#include "hbell/bell.hpp"
#include "hbell/kernels.hpp"
#include "hbell/linear_optics.hpp"
#include "hbell/pipeline.hpp"
#include "hbell/sampler.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace hbell;

namespace {

std::vector<double> random_coeffs(std::size_t n) {
    std::mt19937_64 rng(n);
    std::normal_distribution<double> g;
    std::vector<double> c(n);
    for (double& x : c) x = g(rng);
    return c;
}

template <bool Parallel>
void binomial_convolution(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    const auto c = random_coeffs(n);
    for (auto _ : st) {
        auto out = Parallel ? kernels::omp::binomial_convolution(c, 2 * n - 1)
                            : kernels::serial::binomial_convolution(c, 2 * n - 1);
        benchmark::DoNotOptimize(out.data());
    }
}

template <bool Parallel>
void apply_mode_pair(benchmark::State& st) {
    const auto k = static_cast<std::size_t>(st.range(0));
    const std::array<std::size_t, 4> dims{k, k, k, k};
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    std::vector<cplx> data(k * k * k * k);
    for (auto& x : data) x = {g(rng), g(rng)};
    const auto u = bs_blocks(BeamSplitter::balanced(), 2 * (k - 1));
    for (auto _ : st) {
        auto out = Parallel ? kernels::omp::apply_mode_pair(data, dims, 0, 2, u)
                            : kernels::serial::apply_mode_pair(data, dims, 0, 2, u);
        benchmark::DoNotOptimize(out.data());
    }
}

struct Grid {
    std::vector<double> psi, weights;
    std::size_t levels;
};

Grid make_grid(std::size_t levels, std::size_t panels) {
    const auto rule = composite_gauss_legendre(0.0, 14.0, panels, 16);
    return {kernels::hermite_table(rule.nodes, levels - 1), rule.weights, levels};
}

template <bool Parallel>
void overlap_quadrature(benchmark::State& st) {
    const auto grid = make_grid(static_cast<std::size_t>(st.range(0)), 64);
    for (auto _ : st) {
        auto out = Parallel ? kernels::omp::overlap_quadrature(grid.psi, grid.weights, grid.levels)
                            : kernels::serial::overlap_quadrature(grid.psi, grid.weights, grid.levels);
        benchmark::DoNotOptimize(out.data());
    }
}

template <bool Parallel>
void bell_quadratic_form(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    const OverlapTable g(n - 1);
    const auto c = random_coeffs(n);
    for (auto _ : st) {
        double v = Parallel ? kernels::omp::bell_quadratic_form(c, g.data(), n, 0.7, 1)
                            : kernels::serial::bell_quadratic_form(c, g.data(), n, 0.7, 1);
        benchmark::DoNotOptimize(v);
    }
}

template <bool Parallel>
void quadrant_integral(benchmark::State& st) {
    const auto grid = make_grid(static_cast<std::size_t>(st.range(0)), 16);
    const auto c = random_coeffs(grid.levels);
    for (auto _ : st) {
        double v = Parallel ? kernels::omp::quadrant_integral(c, 0.7, grid.psi, grid.weights)
                            : kernels::serial::quadrant_integral(c, 0.7, grid.psi, grid.weights);
        benchmark::DoNotOptimize(v);
    }
}

template <Exec E>
void sampler(benchmark::State& st) {
    const JointSampler s(run_pipeline({}).final_state());
    const auto n = static_cast<std::size_t>(st.range(0));
    std::uint64_t seed = 1;
    for (auto _ : st) benchmark::DoNotOptimize(s.sample(std::numbers::pi / 4, n, seed++, E).counts);
    st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * n));
}

}  // namespace

BENCHMARK(binomial_convolution<false>)->Name("binomial_convolution/serial")->Arg(64)->Arg(512);
BENCHMARK(binomial_convolution<true>)->Name("binomial_convolution/omp")->Arg(64)->Arg(512);
BENCHMARK(apply_mode_pair<false>)->Name("apply_mode_pair/serial")->Arg(8)->Arg(14);
BENCHMARK(apply_mode_pair<true>)->Name("apply_mode_pair/omp")->Arg(8)->Arg(14);
BENCHMARK(overlap_quadrature<false>)->Name("overlap_quadrature/serial")->Arg(33)->Arg(65);
BENCHMARK(overlap_quadrature<true>)->Name("overlap_quadrature/omp")->Arg(33)->Arg(65);
BENCHMARK(bell_quadratic_form<false>)->Name("bell_quadratic_form/serial")->Arg(33)->Arg(65);
BENCHMARK(bell_quadratic_form<true>)->Name("bell_quadratic_form/omp")->Arg(33)->Arg(65);
BENCHMARK(quadrant_integral<false>)->Name("quadrant_integral/serial")->Arg(9)->Arg(17);
BENCHMARK(quadrant_integral<true>)->Name("quadrant_integral/omp")->Arg(9)->Arg(17);
BENCHMARK(sampler<Exec::Serial>)->Name("sampler/serial")->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(sampler<Exec::Parallel>)->Name("sampler/omp")->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
