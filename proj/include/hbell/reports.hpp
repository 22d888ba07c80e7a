#pragma once

// JSON and CSV renderings of the module reports written by the command-line tool.

#include "hbell/bell.hpp"
#include "hbell/optimizer.hpp"
#include "hbell/pipeline.hpp"
#include "hbell/sampler.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hbell {

enum class OutputFormat { Json, Csv };

OutputFormat parse_format(const std::string& name);

/// Flat record: chi, p_pp_chi, p_pp_3chi, E_chi, E_3chi, B, S, cutoff, provenance,
/// then B_literal_angles, S_literal_angles and diagnostics.
std::string bell_report_json(const BellReport& r);
std::string bell_report_csv(const std::vector<BellReport>& rows);

/// State file fields for the final state plus "stages", "total_success_probability",
/// "stage1", "bell" and "warnings".
std::string pipeline_report_json(const PipelineReport& rep, const std::optional<BellReport>& bell);
/// One row per stage: stage, cutoff, success_probability, tail_mass, c0..cN.
std::string pipeline_report_csv(const PipelineReport& rep);

std::string sample_summary_json(const SampleBatch& b, double analytic_p_pp, const std::optional<BellEstimate>& est,
                                double analytic_B);
std::string sample_raw_csv(const std::vector<RawSample>& raw);

/// Optimum in state file form plus objective values and the per-start log.
std::string optimization_json(const OptimizationResult& r, const OptimizationProblem& p);

/// Generic CSV with a header row.
std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

}  // namespace hbell
