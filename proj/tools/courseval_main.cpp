// Command line front end: synth | validate | rank | sensitivity | report.
//
// Exit codes: 0 success, 1 a stage failed (bad data, unreadable file, nothing
// to rank), 2 usage errors.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "courseval/datamodel.hpp"
#include "courseval/dates.hpp"
#include "courseval/exec.hpp"
#include "courseval/pipeline.hpp"
#include "courseval/sensitivity.hpp"
#include "courseval/synth.hpp"

namespace {

using namespace courseval;

/// Command line mistakes that surface after parsing (exit code 2).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputArgs {
    std::string data_dir;
    DataPaths paths;
};

void add_input_options(CLI::App* cmd, InputArgs& in) {
    cmd->add_option("--data", in.data_dir,
                    "Directory holding courses.csv, ds1_studies.csv, "
                    "ds2_course_records.csv, ds3_citizens.csv, ds4_contracts.csv");
    cmd->add_option("--courses-file", in.paths.courses, "Course catalogue CSV");
    cmd->add_option("--studies-file", in.paths.ds1, "Regulated studies CSV");
    cmd->add_option("--course-records-file", in.paths.ds2, "Training course records CSV");
    cmd->add_option("--citizens-file", in.paths.ds3, "Citizens CSV");
    cmd->add_option("--contracts-file", in.paths.ds4, "Employment contracts CSV");
}

DataPaths resolve_inputs(const InputArgs& in) {
    DataPaths paths = in.paths;
    const auto fill = [&](std::string& p, const char* name, const char* flag) {
        if (!p.empty())
            return;
        if (in.data_dir.empty())
            throw UsageError(std::string("missing input: pass --data DIR or ") + flag);
        p = (std::filesystem::path(in.data_dir) / name).string();
    };
    fill(paths.courses, "courses.csv", "--courses-file");
    fill(paths.ds1, "ds1_studies.csv", "--studies-file");
    fill(paths.ds2, "ds2_course_records.csv", "--course-records-file");
    fill(paths.ds3, "ds3_citizens.csv", "--citizens-file");
    fill(paths.ds4, "ds4_contracts.csv", "--contracts-file");
    return paths;
}

Date parse_date_arg(const std::string& text, const char* flag) {
    const auto d = Date::parse(text);
    if (!d)
        throw UsageError(std::string(flag) + ": expected YYYY-MM-DD, got '" + text + "'");
    return *d;
}

std::vector<std::pair<std::string, double>>
parse_effects(const std::vector<std::string>& args) {
    std::vector<std::pair<std::string, double>> effects;
    for (const std::string& arg : args) {
        const std::size_t eq = arg.find('=');
        if (eq == std::string::npos || eq == 0)
            throw UsageError("--effect: expected COURSE_ID=BOOST, got '" + arg + "'");
        double value = 0.0;
        try {
            std::size_t used = 0;
            value = std::stod(arg.substr(eq + 1), &used);
            if (used != arg.size() - eq - 1)
                throw std::invalid_argument("trailing text");
        } catch (const std::exception&) {
            throw UsageError("--effect: bad numeric boost in '" + arg + "'");
        }
        effects.emplace_back(arg.substr(0, eq), value);
    }
    return effects;
}

void print_ranking_head(const Ranking& ranking, std::ostream& os) {
    const std::size_t show = std::min<std::size_t>(6, ranking.rows.size());
    for (std::size_t i = 0; i < show; ++i) {
        const RankedAlternative& r = ranking.rows[i];
        char line[160];
        std::snprintf(line, sizeof(line), "  %2d. %-12s [%0.4f, %0.4f] uw=%0.4f q%d\n",
                      r.position, r.label.c_str(), r.r_min, r.r_max, r.mixed, r.quartile);
        os << line;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Measures the employability impact of training courses from "
                 "administrative career data"};
    app.set_config("--config", "", "Read options from a key=value file");
    app.require_subcommand(1);
    app.fallthrough(); // accept app-level flags after the subcommand name

    int threads = 0;
    bool serial = false;
    app.add_option("--threads", threads, "Worker threads (0 = hardware default)")
        ->check(CLI::NonNegativeNumber);
    app.add_flag("--serial", serial, "Run every stage single threaded");

    // --------------------------------------------------------------- synth
    auto* synth_cmd =
        app.add_subcommand("synth", "Generate a synthetic administrative extract");
    SynthConfig synth_cfg;
    std::string synth_out;
    std::string synth_window_end;
    std::vector<std::string> synth_effects;
    synth_cmd->add_option("--out", synth_out, "Output directory")->required();
    synth_cmd->add_option("--citizens", synth_cfg.n_citizens, "Citizens to generate");
    synth_cmd->add_option("--courses", synth_cfg.n_courses, "Courses to generate");
    synth_cmd->add_option("--participant-share", synth_cfg.participant_share,
                          "Share of citizens that take a course");
    synth_cmd->add_option("--employment-rate", synth_cfg.employment_rate,
                          "Long-run share of employed days");
    synth_cmd->add_option("--permanent-share", synth_cfg.permanent_share,
                          "Probability a contract is permanent");
    synth_cmd->add_option("--missing-end-share", synth_cfg.missing_end_share,
                          "Share of contracts written without an end date");
    synth_cmd->add_option("--effect", synth_effects,
                          "Planted effect as COURSE_ID=BOOST (repeatable)");
    synth_cmd->add_option("--seed", synth_cfg.seed, "Generator seed");
    synth_cmd->add_option("--window-end", synth_window_end,
                          "Extract as-of date (YYYY-MM-DD)");

    // ------------------------------------------------------------ validate
    auto* validate_cmd =
        app.add_subcommand("validate", "Ingest the extract and report data quality");
    InputArgs validate_in;
    std::string validate_out;
    add_input_options(validate_cmd, validate_in);
    validate_cmd->add_option("--out", validate_out, "Report directory")->required();

    // ---------------------------------------------------------------- rank
    auto* rank_cmd = app.add_subcommand(
        "rank", "Run the full analysis and rank courses by employability impact");
    InputArgs rank_in;
    RunConfig rank_cfg;
    std::string rank_as_of;
    int rank_k_override = 0;
    add_input_options(rank_cmd, rank_in);
    rank_cmd->add_option("--out", rank_cfg.out_dir, "Artifact directory")->required();
    rank_cmd->add_option("--horizon", rank_cfg.cohort.horizon_days,
                         "Outcome window length in days");
    rank_cmd->add_option("--age-window", rank_cfg.cohort.age_window_years,
                         "Maximum age difference for control candidates (years)");
    rank_cmd->add_option("--nn-cap", rank_cfg.cohort.nn_cap,
                         "Nearest candidates kept per participant");
    rank_cmd->add_option("--sample", rank_cfg.cohort.sample_size,
                         "Participants sampled to pick a course's cluster count");
    auto* k_override_opt = rank_cmd->add_option(
        "--k-override", rank_k_override, "Fixed cluster count (skips the scan)");
    rank_cmd->add_option("--gap-k-max", rank_cfg.cohort.gap_k_max,
                         "Largest cluster count scanned");
    rank_cmd->add_option("--gap-refs", rank_cfg.cohort.gap_n_refs,
                         "Reference draws per scanned cluster count");
    rank_cmd->add_option("--stride", rank_cfg.cohort.stride,
                         "Curve subsampling step for distances");
    rank_cmd->add_option("--seed", rank_cfg.cohort.seed, "Sampling seed");
    rank_cmd->add_option("--lower", rank_cfg.bounds.lower, "Weight lower bound");
    rank_cmd->add_option("--upper", rank_cfg.bounds.upper, "Weight upper bound");
    rank_cmd->add_option("--k1", rank_cfg.bounds.k1,
                         "Mix of the score interval endpoints (1 = lower only)");
    rank_cmd->add_option("--min-participants", rank_cfg.min_participants,
                         "Scored participants required per criterion");
    rank_cmd->add_option("--as-of", rank_as_of,
                         "Observation cutoff YYYY-MM-DD (default: latest data date)");
    rank_cmd->add_flag("--pool-include-participants",
                       rank_cfg.pool_includes_other_participants,
                       "Let participants of other courses join control pools");
    rank_cmd->add_option("--export-wlc", rank_cfg.export_curves,
                         "Citizen id whose curve to export (repeatable)");

    // --------------------------------------------------------- sensitivity
    auto* sens_cmd = app.add_subcommand(
        "sensitivity", "Sweep weight bounds and the endpoint mix over a stored matrix");
    std::string sens_matrix, sens_out;
    SweepConfig sens_cfg;
    sens_cmd->add_option("--matrix", sens_matrix, "decision_matrix.csv from a rank run")
        ->required();
    sens_cmd->add_option("--out", sens_out, "Report directory")->required();
    sens_cmd->add_option("--l-min", sens_cfg.l_min, "Lower-bound axis start");
    sens_cmd->add_option("--l-max", sens_cfg.l_max, "Lower-bound axis end");
    sens_cmd->add_option("--u-min", sens_cfg.u_min, "Upper-bound axis start");
    sens_cmd->add_option("--u-max", sens_cfg.u_max, "Upper-bound axis end");
    sens_cmd->add_option("--k1-min", sens_cfg.k1_min, "Endpoint-mix axis start");
    sens_cmd->add_option("--k1-max", sens_cfg.k1_max, "Endpoint-mix axis end");
    sens_cmd->add_option("--grid-steps", sens_cfg.grid_steps, "Points per axis");
    sens_cmd->add_option("--baseline-l", sens_cfg.baseline_l, "Baseline lower bound");
    sens_cmd->add_option("--baseline-u", sens_cfg.baseline_u, "Baseline upper bound");
    sens_cmd->add_option("--baseline-k1", sens_cfg.baseline_k1, "Baseline endpoint mix");

    // -------------------------------------------------------------- report
    auto* report_cmd =
        app.add_subcommand("report", "Rebuild summaries from stored rank artifacts");
    std::string report_out;
    report_cmd->add_option("--out", report_out, "Artifact directory of a rank run")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        set_threads(threads);
        const ExecPolicy policy = serial ? ExecPolicy::serial : ExecPolicy::parallel;

        if (synth_cmd->parsed()) {
            synth_cfg.course_effects = parse_effects(synth_effects);
            if (!synth_window_end.empty())
                synth_cfg.window_end = parse_date_arg(synth_window_end, "--window-end");
            const SynthResult result = generate_synthetic(synth_cfg, synth_out);
            std::cout << "wrote " << result.files.size() << " files to " << synth_out
                      << '\n';
        } else if (validate_cmd->parsed()) {
            RunConfig cfg;
            cfg.inputs = resolve_inputs(validate_in);
            cfg.out_dir = validate_out;
            cfg.policy = policy;
            const Dataset data = ingest(cfg.inputs);
            run_validate(data, cfg, std::cout);
        } else if (rank_cmd->parsed()) {
            rank_cfg.inputs = resolve_inputs(rank_in);
            rank_cfg.policy = policy;
            if (k_override_opt->count())
                rank_cfg.cohort.k_override = rank_k_override;
            if (!rank_as_of.empty())
                rank_cfg.as_of = parse_date_arg(rank_as_of, "--as-of");
            const Dataset data = ingest(rank_cfg.inputs);
            const RankArtifacts art = run_rank(data, rank_cfg);
            std::cout << "ranked " << art.ranking.rows.size() << " of "
                      << data.courses.size() << " courses\n";
            print_ranking_head(art.ranking, std::cout);
            std::cout << "artifacts in " << rank_cfg.out_dir << '\n';
        } else if (sens_cmd->parsed()) {
            const SweepResult result = run_sensitivity(sens_matrix, sens_out, sens_cfg, policy);
            std::cout << "swept " << result.rows.size() << " parameter sets ("
                      << result.notes.size() << " notes)\n";
            std::cout << "reports in " << sens_out << '\n';
        } else if (report_cmd->parsed()) {
            run_report(report_out, std::cout);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
