#include "hbell/reports.hpp"

#include "hbell/error.hpp"
#include "hbell/format.hpp"
#include "hbell/state_io.hpp"

#include <json.hpp>

#include <sstream>

namespace hbell {

namespace {

using ojson = nlohmann::ordered_json;

// Appends `"key": value` blocks to a state file document, indented to nest.
std::string extend_state_json(const std::string& state_json, const ojson& extra) {
    std::string head = state_json.substr(0, state_json.rfind('}'));
    while (!head.empty() && (head.back() == '\n' || head.back() == ' ')) head.pop_back();
    std::ostringstream os;
    os << head;
    for (const auto& [key, value] : extra.items()) {
        std::string v = value.dump(2);
        std::string nested;
        for (char ch : v) {
            nested += ch;
            if (ch == '\n') nested += "  ";
        }
        os << ",\n  " << ojson(key).dump() << ": " << nested;
    }
    os << "\n}\n";
    return os.str();
}

ojson bell_object(const BellReport& r) {
    ojson j;
    j["chi"] = r.chi;
    j["p_pp_chi"] = r.p_pp_chi;
    j["p_pp_3chi"] = r.p_pp_3chi;
    j["E_chi"] = r.E_chi;
    j["E_3chi"] = r.E_3chi;
    j["B"] = r.B;
    j["S"] = r.S;
    j["cutoff"] = r.cutoff;
    j["provenance"] = r.provenance;
    j["B_literal_angles"] = r.B_literal_angles;
    j["S_literal_angles"] = r.S_literal_angles;
    j["diagnostics"] = r.diagnostics;
    return j;
}

ojson nullable(const std::optional<double>& x) { return x ? ojson(*x) : ojson(nullptr); }

}  // namespace

OutputFormat parse_format(const std::string& name) {
    if (name == "json") return OutputFormat::Json;
    if (name == "csv") return OutputFormat::Csv;
    throw Error("cli-app", "unknown format '" + name + "' (expected json or csv)");
}

std::string bell_report_json(const BellReport& r) { return bell_object(r).dump(2) + "\n"; }

std::string bell_report_csv(const std::vector<BellReport>& rows) {
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows) {
        std::string diag;
        for (const auto& d : r.diagnostics) diag += (diag.empty() ? "" : "; ") + d;
        cells.push_back({csv_number(r.chi), csv_number(r.p_pp_chi), csv_number(r.p_pp_3chi), csv_number(r.E_chi),
                         csv_number(r.E_3chi), csv_number(r.B), csv_number(r.S), std::to_string(r.cutoff),
                         r.provenance, csv_number(r.B_literal_angles), csv_number(r.S_literal_angles), diag});
    }
    return csv_table({"chi", "p_pp_chi", "p_pp_3chi", "E_chi", "E_3chi", "B", "S", "cutoff", "provenance",
                      "B_literal_angles", "S_literal_angles", "diagnostics"},
                     cells);
}

std::string pipeline_report_json(const PipelineReport& rep, const std::optional<BellReport>& bell) {
    ojson extra;
    ojson stages = ojson::array();
    for (const auto& s : rep.stages) {
        ojson st;
        st["stage"] = s.name;
        st["cutoff"] = s.state.cutoff();
        st["success_probability"] = nullable(s.success_probability);
        st["tail_mass"] = s.tail_mass;
        st["coefficients"] = std::vector<double>(s.state.coeffs().begin(), s.state.coeffs().end());
        stages.push_back(std::move(st));
    }
    extra["stages"] = std::move(stages);
    extra["total_success_probability"] = rep.total_success_probability;
    if (rep.stage1) {
        ojson s1;
        s1["lambda"] = rep.stage1->lambda;
        s1["transmissivity"] = rep.stage1->transmissivity;
        s1["trace_distance"] = rep.stage1->trace_distance;
        s1["success_probability"] = rep.stage1->success_probability;
        extra["stage1"] = std::move(s1);
    } else {
        extra["stage1"] = nullptr;
    }
    extra["bell"] = bell ? bell_object(*bell) : ojson(nullptr);
    extra["warnings"] = rep.warnings;
    return extend_state_json(state_to_json(rep.final_state(), rep.provenance()), extra);
}

std::string pipeline_report_csv(const PipelineReport& rep) {
    std::size_t width = 0;
    for (const auto& s : rep.stages) width = std::max(width, s.state.size());
    std::vector<std::string> header{"stage", "cutoff", "success_probability", "tail_mass"};
    for (std::size_t n = 0; n < width; ++n) header.push_back("c" + std::to_string(n));
    std::vector<std::vector<std::string>> rows;
    for (const auto& s : rep.stages) {
        std::vector<std::string> row{s.name, std::to_string(s.state.cutoff()),
                                     s.success_probability ? csv_number(*s.success_probability) : "",
                                     csv_number(s.tail_mass)};
        for (std::size_t n = 0; n < width; ++n) row.push_back(n < s.state.size() ? csv_number(s.state[n]) : "");
        rows.push_back(std::move(row));
    }
    return csv_table(header, rows);
}

std::string sample_summary_json(const SampleBatch& b, double analytic_p_pp, const std::optional<BellEstimate>& est,
                                double analytic_B) {
    ojson j;
    j["generator"] = b.generator;
    j["seed"] = b.seed;
    j["n_samples"] = b.n_samples;
    j["theta"] = b.theta;
    j["phi"] = b.phi;
    j["counts"] = {{"pp", b.counts[0][0]}, {"pm", b.counts[0][1]}, {"mp", b.counts[1][0]}, {"mm", b.counts[1][1]}};
    j["p_pp_hat"] = b.frequency(+1, +1);
    j["p_pp"] = analytic_p_pp;
    j["E_hat"] = b.correlation();
    if (est) {
        j["companion_seed"] = est->batch_3chi.seed;
        j["E_3chi_hat"] = est->E_3chi;
        j["B_hat"] = est->B_hat;
        j["stderr_B"] = est->stderr_B;
        j["B"] = analytic_B;
        j["z"] = est->stderr_B > 0.0 ? (est->B_hat - analytic_B) / est->stderr_B : 0.0;
    }
    return j.dump(2) + "\n";
}

std::string sample_raw_csv(const std::vector<RawSample>& raw) {
    std::ostringstream os;
    os << "x_A,x_B,sign_A,sign_B\n";
    for (const auto& s : raw) {
        os << csv_number(s.x_a) << ',' << csv_number(s.x_b) << ',' << (s.x_a >= 0.0 ? 1 : -1) << ','
           << (s.x_b >= 0.0 ? 1 : -1) << '\n';
    }
    return os.str();
}

std::string optimization_json(const OptimizationResult& r, const OptimizationProblem& p) {
    ojson extra;
    extra["objective"] = objective_name(p.objective);
    extra["chi"] = p.chi;
    extra["value"] = r.value;
    extra["B"] = r.B;
    extra["S"] = r.S;
    extra["seed"] = p.seed;
    extra["nonnegative"] = p.nonnegative;
    ojson starts = ojson::array();
    for (const auto& s : r.starts) {
        starts.push_back({{"label", s.label},
                          {"seed", s.seed},
                          {"value", s.value},
                          {"evaluations", s.evaluations},
                          {"accepted_steps", s.accepted.size()}});
    }
    extra["starts"] = std::move(starts);
    return extend_state_json(state_to_json(r.state, r.provenance), extra);
}

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    auto cell = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    };
    std::ostringstream os;
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << cell(header[i]);
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell(row[i]);
        os << '\n';
    }
    return os.str();
}

}  // namespace hbell
