#pragma once

// Maximization of the Bell functionals over coefficient vectors, family
// parameters and the phase sum χ.
//
// On the unit sphere both functionals are quadratic forms:
//     B(c) = cᵀ(12Q(χ) − 4Q(3χ))c − 2,   S(c) = cᵀ(3Q(χ) − Q(3χ))c,
// with Q_nm(χ) = cos((n−m)χ) G_nm².

#include "hbell/catalog.hpp"
#include "hbell/fock.hpp"

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace hbell {

enum class Objective { Chsh, Ch };

std::string objective_name(Objective o);
Objective parse_objective(const std::string& name);

inline constexpr std::size_t kMaxOptimizerCutoff = 16;

struct OptimizationProblem {
    Objective objective = Objective::Chsh;
    /// Coefficients c_0..c_N are optimized.
    std::size_t n = 10;
    double chi = std::numbers::pi / 4;
    std::size_t starts = 32;
    double tolerance = 1e-9;
    std::size_t max_evaluations = 10000;
    bool nonnegative = false;
    std::uint64_t seed = 1;
    /// Adds the pipeline state and the ξ = 1/√2 seed as extra starts.
    bool warm_starts = true;
};

struct StartLog {
    std::string label;
    std::uint64_t seed = 0;  ///< 0 for warm starts
    double value = 0.0;
    std::size_t evaluations = 0;
    /// Objective after each accepted step; nondecreasing.
    std::vector<double> accepted;
};

struct OptimizationResult {
    CoefficientVector state;
    double value = 0.0;  ///< B* or S*, matching the objective
    double B = 0.0;
    double S = 0.0;
    std::vector<StartLog> starts;
    std::string provenance;
};

/// Quadratic form matrix A and offset so that objective(c) = cᵀAc + offset on
/// unit vectors. Row-major (N+1)×(N+1).
struct QuadraticObjective {
    std::size_t levels;
    std::vector<double> a;
    double offset;

    double value(std::span<const double> c) const;
};

QuadraticObjective quadratic_objective(Objective o, std::size_t n, double chi);

OptimizationResult optimize_coefficients(const OptimizationProblem& p);

enum class ParameterFamily { Tmss, Circle, PhotonSubtractedTmss, Seed, PipelineXi };

std::string parameter_family_name(ParameterFamily f);
ParameterFamily parse_parameter_family(const std::string& name);

struct FamilyRange {
    double lo;
    double hi;
};

/// Default search interval: λ ∈ [0.01, 0.95], r ∈ [0.5, 2], ξ ∈ [0.1, 3].
FamilyRange default_range(ParameterFamily f);

/// Bell functional of the family member at `parameter`.
double family_objective(ParameterFamily f, double parameter, double chi, Objective o = Objective::Chsh);

struct ScalarOptimum {
    double argument;
    double value;
};

/// Grid of `grid` points over the range, then golden section around the best point.
ScalarOptimum optimize_family_parameter(ParameterFamily f, double chi, Objective o = Objective::Chsh,
                                        std::optional<FamilyRange> range = std::nullopt, std::size_t grid = 61);

/// Maximizes the functional over χ ∈ (0, π/2]. A flat objective returns π/4.
ScalarOptimum optimize_angle(const CoefficientVector& v, Objective o = Objective::Chsh);

}  // namespace hbell
