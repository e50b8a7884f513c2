#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

const char* cli_path() { return COURSEVAL_CLI_PATH; }

struct CliResult {
    int exit_code = -1;
    std::string output; // stdout and stderr combined
};

CliResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path log =
        fs::temp_directory_path() / ("courseval_cli_log_" + std::to_string(counter++));
    const std::string cmd =
        std::string("\"") + cli_path() + "\" " + args + " > " + log.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(log);
    std::ostringstream os;
    os << in.rdbuf();
    r.output = os.str();
    fs::remove(log);
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("help and usage errors use the documented exit codes") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("rank --help").exit_code == 0);
    CHECK(run_cli("no-such-command").exit_code == 2);
    CHECK(run_cli("rank").exit_code == 2);           // missing required options
    CHECK(run_cli("--bogus-flag synth").exit_code == 2);
    // Input files that do not exist are a runtime failure, not a usage error.
    const auto r = run_cli("validate --data /nonexistent-dir --out /tmp/courseval_cli_x");
    CHECK(r.exit_code == 1);
    // Passing neither --data nor the per-file flags is a usage error.
    CHECK(run_cli("validate --out /tmp/courseval_cli_x").exit_code == 2);
}

TEST_CASE("the five subcommands chain into a full analysis") {
    const auto data_dir = fresh_dir("courseval_cli_data");
    const auto out_dir = fresh_dir("courseval_cli_out");

    const auto synth = run_cli("synth --out " + data_dir.string() +
                               " --citizens 150 --courses 3 --participant-share 0.3"
                               " --seed 5 --effect C02=0.5");
    CHECK(synth.exit_code == 0);
    for (const char* name : {"courses.csv", "ds1_studies.csv", "ds2_course_records.csv",
                             "ds3_citizens.csv", "ds4_contracts.csv"})
        CHECK(fs::exists(data_dir / name));

    const auto validate =
        run_cli("validate --data " + data_dir.string() + " --out " + out_dir.string());
    CHECK(validate.exit_code == 0);
    CHECK(fs::exists(out_dir / "ingest_summary.txt"));

    const auto rank = run_cli("rank --data " + data_dir.string() + " --out " +
                              out_dir.string() +
                              " --k-override 3 --stride 7 --nn-cap 100 --seed 1");
    CHECK(rank.exit_code == 0);
    for (const char* name : {"decision_matrix.csv", "ranking.csv", "participant_scores.csv",
                             "control_groups.csv", "course_summary.csv", "manifest.txt"})
        CHECK(fs::exists(out_dir / name));
    CHECK(rank.output.find("1.") != std::string::npos);

    const auto sens = run_cli("sensitivity --matrix " +
                              (out_dir / "decision_matrix.csv").string() + " --out " +
                              out_dir.string());
    CHECK(sens.exit_code == 0);
    REQUIRE(fs::exists(out_dir / "sensitivity.csv"));
    std::size_t lines = 0;
    for (const char ch : slurp(out_dir / "sensitivity.csv"))
        if (ch == '\n')
            ++lines;
    CHECK(lines == 1 + 121 + 11); // header, bounds grid, k1 axis

    const auto report = run_cli("report --out " + out_dir.string());
    CHECK(report.exit_code == 0);
    CHECK(report.output.find("quartile") != std::string::npos);

    fs::remove_all(data_dir);
    fs::remove_all(out_dir);
}

TEST_CASE("thread count never changes the outputs") {
    const auto data_dir = fresh_dir("courseval_cli_threads_data");
    const auto out_one = fresh_dir("courseval_cli_threads_one");
    const auto out_many = fresh_dir("courseval_cli_threads_many");

    REQUIRE(run_cli("synth --out " + data_dir.string() +
                    " --citizens 120 --courses 3 --participant-share 0.3 --seed 9")
                .exit_code == 0);

    const std::string rank_args = " --k-override 3 --stride 7 --nn-cap 80 --seed 4";
    REQUIRE(run_cli("rank --threads 1 --data " + data_dir.string() + " --out " +
                    out_one.string() + rank_args)
                .exit_code == 0);
    REQUIRE(run_cli("rank --threads 3 --data " + data_dir.string() + " --out " +
                    out_many.string() + rank_args)
                .exit_code == 0);

    // The manifest hashes every produced file, so equal manifests mean
    // byte-equal artifacts.
    CHECK(slurp(out_one / "manifest.txt") == slurp(out_many / "manifest.txt"));

    fs::remove_all(data_dir);
    fs::remove_all(out_one);
    fs::remove_all(out_many);
}

TEST_CASE("options can come from a config file") {
    const auto data_dir = fresh_dir("courseval_cli_config_data");
    const auto cfg = data_dir / "settings.ini";
    {
        std::ofstream os(cfg);
        os << "threads=1\n";
    }
    const auto r = run_cli("--config " + cfg.string() + " synth --out " +
                           data_dir.string() + " --citizens 40 --courses 2");
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(data_dir / "courses.csv"));
    fs::remove_all(data_dir);
}
