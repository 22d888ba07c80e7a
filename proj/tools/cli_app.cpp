#include "cli_app.hpp"

#include "hbell/bell.hpp"
#include "hbell/catalog.hpp"
#include "hbell/error.hpp"
#include "hbell/format.hpp"
#include "hbell/kernels.hpp"
#include "hbell/optimizer.hpp"
#include "hbell/pipeline.hpp"
#include "hbell/reports.hpp"
#include "hbell/sampler.hpp"
#include "hbell/state_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace hbell::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::optional<std::size_t> cutoff;
    std::string out = "-";
    std::string format = "json";
    std::uint64_t seed = 1;
};

std::string rows_to_json(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json o;
        for (std::size_t i = 0; i < header.size(); ++i) {
            // Numeric cells stay numeric.
            try {
                std::size_t used = 0;
                const double v = std::stod(r[i], &used);
                if (used == r[i].size()) {
                    o[header[i]] = v;
                    continue;
                }
            } catch (const std::exception&) {
            }
            o[header[i]] = r[i];
        }
        arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
}

std::string table(const Common& c, const std::vector<std::string>& header,
                  const std::vector<std::vector<std::string>>& rows) {
    return c.format == "csv" ? csv_table(header, rows) : rows_to_json(header, rows);
}

void write_sidecar_log(const Common& c, int argc, const char* const* argv) {
    if (c.out.empty() || c.out == "-") return;
    std::ofstream log(c.out + ".log");
    if (!log) return;
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    log << "timestamp: " << stamp << "\ncommand:";
    for (int i = 0; i < argc; ++i) log << ' ' << argv[i];
    log << "\nthreads: " << kernels::max_threads() << '\n';
}

CoefficientVector load_state(const std::string& path, const Common& c, std::string& provenance) {
    auto f = read_state_file(path);
    provenance = f.provenance.empty() ? "custom(" + path + ")" : f.provenance;
    CoefficientVector v = f.state;
    if (c.cutoff && *c.cutoff != v.cutoff()) v = v.resized(*c.cutoff);
    if (!v.normalized()) v = normalize(v);
    return v;
}

// ---------------------------------------------------------------------------

struct StateArgs {
    std::string family;
    std::optional<double> lambda, r, xi;
    std::string file;
    bool compare = false;
};

CatalogSpec catalog_spec(const StateArgs& a, const Common& c) {
    CatalogSpec spec;
    spec.cutoff = c.cutoff;
    Family fam;
    try {
        fam = parse_family(a.family);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    spec.family = fam;
    auto need = [&](const std::optional<double>& x, const char* flag) {
        if (!x) throw UsageError("family " + a.family + " needs " + flag);
        return *x;
    };
    switch (fam) {
        case Family::Tmss:
        case Family::PhotonSubtractedTmss: spec.parameter = need(a.lambda, "--lambda"); break;
        case Family::Circle: spec.parameter = need(a.r, "--r"); break;
        case Family::Seed: spec.parameter = need(a.xi, "--xi"); break;
        case Family::Custom:
            if (a.file.empty()) throw UsageError("family custom needs --file");
            spec.path = a.file;
            break;
    }
    return spec;
}

std::string compare_table(const Common& c) {
    const std::size_t rows = 13;
    std::vector<std::pair<std::string, CoefficientVector>> cols;
    auto add = [&](CatalogSpec spec) {
        auto s = make_state(spec);
        cols.push_back({s.provenance, s.state});
    };
    add({Family::Tmss, 0.6, std::nullopt, {}});
    add({Family::PhotonSubtractedTmss, 0.6, std::nullopt, {}});
    add({Family::Circle, 1.12, std::nullopt, {}});
    PipelineConfig cfg;
    cfg.xi = 0.71;
    const auto rep = run_pipeline(cfg);
    cols.push_back({rep.provenance(), rep.final_state()});
    OptimizationProblem p;
    p.seed = c.seed;
    const auto opt = optimize_coefficients(p);
    cols.push_back({opt.provenance, opt.state});

    std::vector<std::string> header{"n"};
    for (const auto& col : cols) header.push_back(col.first);
    std::vector<std::vector<std::string>> cells;
    for (std::size_t n = 0; n < rows; ++n) {
        std::vector<std::string> row{std::to_string(n)};
        for (const auto& col : cols) row.push_back(csv_number(n < col.second.size() ? col.second[n] : 0.0));
        cells.push_back(std::move(row));
    }
    return csv_table(header, cells);
}

int cmd_state(const StateArgs& a, const Common& c) {
    if (a.compare) {
        write_text(c.out, compare_table(c));
        return 0;
    }
    if (a.family.empty()) throw UsageError("state needs --family or --compare");
    const auto s = make_state(catalog_spec(a, c));
    for (const auto& w : s.warnings) std::cerr << "warning: " << w << '\n';
    if (c.format == "csv") {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t n = 0; n < s.state.size(); ++n) rows.push_back({std::to_string(n), csv_number(s.state[n])});
        write_text(c.out, csv_table({"n", "c"}, rows));
    } else {
        write_text(c.out, state_to_json(s.state, s.provenance));
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct PipelineArgs {
    double xi = 1.0 / std::numbers::sqrt2;
    int iters = 3;
    std::string subtraction = "exact";
    double r = 0.01;
    std::optional<double> lambda;
    bool verify_stage1 = false;
    double chi = std::numbers::pi / 4;
};

int cmd_pipeline(const PipelineArgs& a, const Common& c) {
    PipelineConfig cfg;
    cfg.xi = a.xi;
    cfg.iterations = a.iters;
    if (c.cutoff) cfg.cutoff = *c.cutoff;
    if (a.subtraction == "exact") {
        cfg.subtraction = SubtractionMode::Exact;
    } else if (a.subtraction == "beamsplitter") {
        cfg.subtraction = SubtractionMode::BeamSplitter;
        cfg.reflectivity = a.r;
    } else {
        throw UsageError("--subtraction must be exact or beamsplitter");
    }
    if (a.verify_stage1 && !a.lambda) throw UsageError("--verify-stage1 needs --lambda");
    cfg.lambda = a.lambda;
    try {
        cfg.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    const auto rep = run_pipeline(cfg);
    for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';
    if (c.format == "csv") {
        write_text(c.out, pipeline_report_csv(rep));
    } else {
        write_text(c.out, pipeline_report_json(rep, bell_report(rep.final_state(), a.chi, rep.provenance())));
    }
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_bell(const std::string& path, double chi, const Common& c) {
    std::string prov;
    const auto v = load_state(path, c, prov);
    const auto r = bell_report(v, chi, prov);
    for (const auto& d : r.diagnostics) std::cerr << "diagnostic: " << d << '\n';
    write_text(c.out, c.format == "csv" ? bell_report_csv({r}) : bell_report_json(r));
    return 0;
}

// ---------------------------------------------------------------------------

struct ScanArgs {
    std::string family;
    std::string param;
    double from = 0.0;
    double to = 1.0;
    std::size_t steps = 11;
    std::string metric = "chsh";
    double chi = std::numbers::pi / 4;
    std::optional<double> at;
};

double family_default(ParameterFamily f) {
    switch (f) {
        case ParameterFamily::Circle: return 1.12;
        case ParameterFamily::Seed:
        case ParameterFamily::PipelineXi: return 1.0 / std::numbers::sqrt2;
        default: return 0.6;
    }
}

std::string family_param_name(ParameterFamily f) {
    switch (f) {
        case ParameterFamily::Circle: return "r";
        case ParameterFamily::Seed:
        case ParameterFamily::PipelineXi: return "xi";
        default: return "lambda";
    }
}

int cmd_scan(const ScanArgs& a, const Common& c) {
    ParameterFamily fam;
    try {
        fam = parse_parameter_family(a.family);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    Objective metric;
    try {
        metric = parse_objective(a.metric);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    if (a.steps < 1) throw UsageError("--steps must be at least 1");
    const std::string value_col = metric == Objective::Chsh ? "B" : "S";

    std::vector<std::vector<std::string>> rows;
    if (a.param == "iters") {
        if (fam != ParameterFamily::PipelineXi) throw UsageError("--param iters needs --family pipeline");
        const int lo = static_cast<int>(std::lround(a.from));
        const int hi = static_cast<int>(std::lround(a.to));
        if (lo < 0 || hi < lo) throw UsageError("iteration range must satisfy 0 <= from <= to");
        const auto scan = overgaussification_scan(a.at.value_or(family_default(fam)), hi, c.cutoff.value_or(32));
        for (const auto& row : scan) {
            if (row.iterations < lo) continue;
            rows.push_back({std::to_string(row.iterations), csv_number(row.B), csv_number(row.S),
                            csv_number(metric == Objective::Chsh ? row.B : row.S)});
        }
        write_text(c.out, table(c, {"iters", "B", "S", "value"}, rows));
        return 0;
    }

    const bool over_chi = a.param == "chi";
    if (!over_chi && a.param != family_param_name(fam)) {
        throw UsageError("family " + a.family + " is scanned over --param " + family_param_name(fam) + " or chi");
    }
    for (std::size_t i = 0; i < a.steps; ++i) {
        const double x = a.steps == 1 ? a.from
                                      : a.from + (a.to - a.from) * static_cast<double>(i) /
                                                     static_cast<double>(a.steps - 1);
        const double p = over_chi ? a.at.value_or(family_default(fam)) : x;
        const double chi = over_chi ? x : a.chi;
        const double B = family_objective(fam, p, chi, Objective::Chsh);
        const double S = family_objective(fam, p, chi, Objective::Ch);
        rows.push_back({csv_number(x), csv_number(B), csv_number(S), csv_number(metric == Objective::Chsh ? B : S)});
    }
    write_text(c.out, table(c, {a.param, "B", "S", "value"}, rows));
    return 0;
}

// ---------------------------------------------------------------------------

struct SampleArgs {
    std::string state;
    double chi = std::numbers::pi / 4;
    std::size_t n = 100000;
    std::string raw;
};

int cmd_sample(const SampleArgs& a, const Common& c) {
    if (a.n < 1) throw UsageError("--n must be at least 1");
    std::string prov;
    const auto v = load_state(a.state, c, prov);
    const JointSampler sampler(v);
    std::vector<RawSample> raw;
    const auto est = estimate_B(sampler, a.chi, a.n, c.seed);
    if (!a.raw.empty()) {
        sampler.sample(a.chi, a.n, c.seed, Exec::Parallel, &raw);
        write_text(a.raw, sample_raw_csv(raw));
    }
    const BellEvaluator ev(v.cutoff());
    const double p_pp = ev.p_plus_plus(v, a.chi);
    const double B = ev.chsh(v, a.chi);
    if (c.format == "csv") {
        const auto& b = est.batch_chi;
        write_text(c.out, csv_table({"seed", "n_samples", "chi", "n_pp", "n_pm", "n_mp", "n_mm", "p_pp_hat", "p_pp",
                                     "B_hat", "stderr_B", "B", "generator"},
                                    {{std::to_string(b.seed), std::to_string(b.n_samples), csv_number(a.chi),
                                      std::to_string(b.counts[0][0]), std::to_string(b.counts[0][1]),
                                      std::to_string(b.counts[1][0]), std::to_string(b.counts[1][1]),
                                      csv_number(b.frequency(+1, +1)), csv_number(p_pp), csv_number(est.B_hat),
                                      csv_number(est.stderr_B), csv_number(B), b.generator}}));
    } else {
        write_text(c.out, sample_summary_json(est.batch_chi, p_pp, est, B));
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct OptimizeArgs {
    std::string objective = "chsh";
    std::optional<std::size_t> n;
    double chi = std::numbers::pi / 4;
    std::size_t starts = 32;
    bool nonnegative = false;
    std::string sweep;
};

int cmd_optimize(const OptimizeArgs& a, const Common& c) {
    OptimizationProblem p;
    try {
        p.objective = parse_objective(a.objective);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    p.chi = a.chi;
    p.starts = a.starts;
    p.nonnegative = a.nonnegative;
    p.seed = c.seed;
    p.n = a.n.value_or(c.cutoff.value_or(10));
    if (p.n > kMaxOptimizerCutoff) throw UsageError("--n must be at most " + std::to_string(kMaxOptimizerCutoff));

    if (!a.sweep.empty()) {
        const auto colon = a.sweep.find(':');
        std::size_t lo = 0, hi = 0;
        try {
            if (colon == std::string::npos) throw std::invalid_argument("range");
            lo = std::stoul(a.sweep.substr(0, colon));
            hi = std::stoul(a.sweep.substr(colon + 1));
        } catch (const std::exception&) {
            throw UsageError("--sweep-n expects LO:HI");
        }
        if (hi < lo || hi > kMaxOptimizerCutoff) throw UsageError("--sweep-n needs LO <= HI <= 16");
        std::vector<std::vector<std::string>> rows;
        for (std::size_t n = lo; n <= hi; ++n) {
            p.n = n;
            const auto r = optimize_coefficients(p);
            rows.push_back({std::to_string(n), csv_number(r.value), csv_number(r.B), csv_number(r.S)});
        }
        write_text(c.out, table(c, {"N", "value", "B", "S"}, rows));
        return 0;
    }

    const auto r = optimize_coefficients(p);
    if (c.format == "csv") {
        std::vector<std::string> header{"N", "value", "B", "S"};
        std::vector<std::string> row{std::to_string(p.n), csv_number(r.value), csv_number(r.B), csv_number(r.S)};
        for (std::size_t n = 0; n < r.state.size(); ++n) {
            header.push_back("c" + std::to_string(n));
            row.push_back(csv_number(r.state[n]));
        }
        write_text(c.out, csv_table(header, {row}));
    } else {
        write_text(c.out, optimization_json(r, p));
    }
    return 0;
}

}  // namespace


int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Homodyne Bell tests with conditionally prepared photon-number-correlated states", "hbell"};
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    app.add_option("--cutoff", common.cutoff, "Fock cutoff override");
    app.add_option("--out", common.out, "Output file ('-' for stdout)");
    app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", common.seed, "Random seed");

    StateArgs st;
    auto* s_state = app.add_subcommand("state", "Write a catalog state");
    s_state->add_option("--family", st.family, "tmss, circle, ps-tmss, seed or custom");
    s_state->add_option("--lambda", st.lambda, "Squeezing parameter for tmss and ps-tmss");
    s_state->add_option("--r", st.r, "Circle-state radius");
    s_state->add_option("--xi", st.xi, "Seed parameter");
    s_state->add_option("--file", st.file, "State file for the custom family");
    s_state->add_flag("--compare", st.compare, "Coefficient table of the comparison families, n = 0..12");

    PipelineArgs pa;
    auto* s_pipe = app.add_subcommand("pipeline", "Run the conditional preparation");
    s_pipe->add_option("--xi", pa.xi, "Seed parameter");
    s_pipe->add_option("--iters", pa.iters, "Gaussification rounds")->check(CLI::NonNegativeNumber);
    s_pipe->add_option("--subtraction", pa.subtraction, "exact or beamsplitter");
    s_pipe->add_option("--r", pa.r, "Subtraction beam-splitter reflectivity");
    s_pipe->add_option("--lambda", pa.lambda, "Source squeezing for the stage-1 simulation");
    s_pipe->add_flag("--verify-stage1", pa.verify_stage1, "Simulate stage 1 at --lambda");
    s_pipe->add_option("--chi", pa.chi, "Phase sum for the Bell block");

    std::string bell_state;
    double bell_chi = std::numbers::pi / 4;
    auto* s_bell = app.add_subcommand("bell", "Bell quantities of a state file");
    s_bell->add_option("--state", bell_state, "State file")->required();
    s_bell->add_option("--chi", bell_chi, "Phase sum");

    ScanArgs sc;
    auto* s_scan = app.add_subcommand("scan", "Sweep a family parameter, chi or the iteration count");
    s_scan->add_option("--family", sc.family, "tmss, circle, ps-tmss, seed or pipeline")->required();
    s_scan->add_option("--param", sc.param, "lambda, r, xi, chi or iters")->required();
    s_scan->add_option("--from", sc.from, "First value")->required();
    s_scan->add_option("--to", sc.to, "Last value")->required();
    s_scan->add_option("--steps", sc.steps, "Number of grid points");
    s_scan->add_option("--metric", sc.metric, "chsh or ch");
    s_scan->add_option("--chi", sc.chi, "Phase sum when not scanned");
    s_scan->add_option("--at", sc.at, "Family parameter when scanning chi or iters");

    SampleArgs sa;
    auto* s_sample = app.add_subcommand("sample", "Monte Carlo homodyne records");
    s_sample->add_option("--state", sa.state, "State file")->required();
    s_sample->add_option("--chi", sa.chi, "Phase sum");
    s_sample->add_option("--n", sa.n, "Samples per batch");
    s_sample->add_option("--raw", sa.raw, "Raw (x_A, x_B, sign_A, sign_B) CSV path");

    OptimizeArgs oa;
    auto* s_opt = app.add_subcommand("optimize", "Maximize CHSH or CH over coefficients");
    s_opt->add_option("--objective", oa.objective, "chsh or ch");
    s_opt->add_option("--n", oa.n, "Cutoff N of the optimized vector");
    s_opt->add_option("--chi", oa.chi, "Phase sum");
    s_opt->add_option("--starts", oa.starts, "Random starts");
    s_opt->add_flag("--nonnegative", oa.nonnegative, "Restrict to c_n >= 0");
    s_opt->add_option("--sweep-n", oa.sweep, "Optimize every N in LO:HI");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        int rc = 0;
        if (*s_state) rc = cmd_state(st, common);
        else if (*s_pipe) rc = cmd_pipeline(pa, common);
        else if (*s_bell) rc = cmd_bell(bell_state, bell_chi, common);
        else if (*s_scan) rc = cmd_scan(sc, common);
        else if (*s_sample) rc = cmd_sample(sa, common);
        else if (*s_opt) rc = cmd_optimize(oa, common);
        write_sidecar_log(common, argc, argv);
        return rc;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace hbell::cli
