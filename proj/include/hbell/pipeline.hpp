#pragma once

// Conditional source preparation:
//   stage 1  two TMSS → unbalanced beam splitters → on/off clicks → seed |00> + ξ|11>
//   stage 2  two copies → local 50:50 beam splitters → both ancillas dark, iterated
//   stage 3  photon subtraction from each mode
//
// The default path works on coefficient vectors starting from the ideal seed.
// The four-mode operator path is kept for verification of stages 1 and 2.

#include "hbell/fock.hpp"
#include "hbell/linear_optics.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hbell {

enum class SubtractionMode { Exact, BeamSplitter };

struct PipelineConfig {
    double xi = 0.70710678118654752;
    /// Source squeezing. When set, stage 1 is simulated and its closeness and
    /// heralding probability are reported; the pipeline still uses the ideal seed.
    std::optional<double> lambda;
    int iterations = 3;
    /// Cutoff of the final state.
    std::size_t cutoff = 32;
    std::size_t stage1_cutoff = 4;
    SubtractionMode subtraction = SubtractionMode::Exact;
    /// Reflectivity for SubtractionMode::BeamSplitter.
    double reflectivity = 0.01;

    void validate() const;
};

/// Stage-1 beam splitter for target ξ at squeezing λ: intensity imbalance
/// |t|² − |r|² = −|T(λ)| with |T(λ)| from seed_transmissivity, reflectivity
/// phase π/2.
BeamSplitter stage1_beam_splitter(double xi, double lambda);

struct Stage1Result {
    ConditionalEnsemble ensemble;
    double trace_distance;
    double success_probability;
    BeamSplitter beam_splitter;
    std::vector<std::string> warnings;
};

/// Full four-mode simulation of stage 1 at the given per-mode cutoff (>= 4).
Stage1Result stage1_verify(double xi, double lambda, std::size_t cutoff = 4);

struct GaussifyResult {
    CoefficientVector state;
    /// Probability that both ancilla detectors stay dark.
    double success_probability;
    /// Relative mass dropped when re-truncating to the cutoff.
    double tail_mass;
    std::vector<std::string> warnings;
};

/// Un-normalized recursion c'_n = 2^{-n} Σ_r C(n,r) c_r c_{n−r}, n < out_size.
std::vector<double> gaussify_coefficients(std::span<const double> c, std::size_t out_size);

/// One Gaussification round on a normalized input. The support doubles; the
/// output is re-truncated to `max_cutoff`.
GaussifyResult gaussify_step(const CoefficientVector& v, std::size_t max_cutoff = 64);

/// Same round through the operators: two copies on modes (a,b) and (c,d),
/// 50:50 beam splitters U_ac ⊗ U_bd, project c and d on vacuum. Returns the
/// un-normalized conditional state on (a,b) at per-mode cutoff 2N.
TwoModeAmplitudeMatrix gaussify_step_operator(const CoefficientVector& v);

struct StageRecord {
    std::string name;
    CoefficientVector state;
    /// Absent when the stage has no physical herald (exact subtraction, ideal seed).
    std::optional<double> success_probability;
    double tail_mass = 0.0;
};

struct Stage1Summary {
    double lambda;
    double transmissivity;  ///< printed |T(λ)|
    double trace_distance;
    double success_probability;
};

struct PipelineReport {
    PipelineConfig config;
    std::vector<StageRecord> stages;
    std::optional<Stage1Summary> stage1;
    /// Product of every reported stage probability.
    double total_success_probability = 1.0;
    std::vector<std::string> warnings;

    const CoefficientVector& final_state() const { return stages.back().state; }
    std::string provenance() const;
};

PipelineReport run_pipeline(const PipelineConfig& cfg);

struct ScanRow {
    int iterations;
    double B;
    double S;
};

/// CHSH/CH values at χ = π/4 of the subtracted state after i = 0..max_iterations rounds.
std::vector<ScanRow> overgaussification_scan(double xi, int max_iterations, std::size_t cutoff = 32);

}  // namespace hbell
