#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "courseval/datamodel.hpp"
#include "courseval/mcdm.hpp"
#include "courseval/pipeline.hpp"
#include "courseval/synth.hpp"

using namespace courseval;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("generator is byte-identical for identical configurations") {
    SynthConfig config;
    config.n_citizens = 120;
    config.n_courses = 4;
    config.seed = 42;

    const auto dir_a = fresh_dir("courseval_synth_a");
    const auto dir_b = fresh_dir("courseval_synth_b");
    const auto a = generate_synthetic(config, dir_a.string());
    const auto b = generate_synthetic(config, dir_b.string());
    REQUIRE(a.files.size() == b.files.size());
    CHECK(a.files.size() == 6); // five datasets plus the planted-effect echo
    for (std::size_t i = 0; i < a.files.size(); ++i) {
        const auto name_a = std::filesystem::path(a.files[i]).filename();
        const auto name_b = std::filesystem::path(b.files[i]).filename();
        CHECK(name_a == name_b);
        CHECK(slurp(a.files[i]) == slurp(b.files[i]));
    }

    // A different seed must actually change the data.
    config.seed = 43;
    const auto dir_c = fresh_dir("courseval_synth_c");
    const auto c = generate_synthetic(config, dir_c.string());
    CHECK(slurp(c.paths.ds4) != slurp(a.paths.ds4));

    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
    std::filesystem::remove_all(dir_c);
}

TEST_CASE("generated extract ingests cleanly with plausible shares") {
    SynthConfig config;
    config.n_citizens = 300;
    config.n_courses = 5;
    config.seed = 7;

    const auto dir = fresh_dir("courseval_synth_ingest");
    const auto result = generate_synthetic(config, dir.string());
    const auto data = ingest(result.paths);

    CHECK(data.rejects.empty());
    CHECK(data.citizens.size() == 300);
    CHECK(data.courses.size() == 5);
    CHECK(!data.contracts.empty());
    CHECK(!data.enrollments.empty());

    // The configured share of contracts ships without an end date.
    std::size_t missing = 0;
    for (const auto& c : data.contracts)
        if (!c.end_date)
            ++missing;
    const double share = static_cast<double>(missing) / data.contracts.size();
    CHECK(share > 0.15);
    CHECK(share < 0.35);

    // Reported work-day totals are consistent with having contracts at all.
    bool any_reported = false;
    for (const auto v : data.reported_work_days)
        any_reported = any_reported || v > 0;
    CHECK(any_reported);

    std::filesystem::remove_all(dir);
}

TEST_CASE("a planted boost pushes its course to the top of the ranking") {
    SynthConfig config;
    config.n_citizens = 500;
    config.n_courses = 5;
    config.participant_share = 0.3;
    config.seed = 11;
    config.course_effects = {{"C03", 0.5}};

    const auto dir = fresh_dir("courseval_synth_effect");
    const auto result = generate_synthetic(config, dir.string());

    RunConfig run;
    run.inputs = result.paths;
    run.out_dir = (dir / "out").string();
    run.cohort.k_override = 5;
    run.cohort.stride = 7;
    run.cohort.seed = 1;
    run.min_participants = 4;

    const auto artifacts = run_rank(ingest(result.paths), run);
    REQUIRE(!artifacts.ranking.rows.empty());
    CHECK(artifacts.ranking.rows[0].label == "C03");

    std::filesystem::remove_all(dir);
}
