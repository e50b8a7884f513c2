#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "courseval/cohort.hpp"
#include "courseval/criteria.hpp"
#include "courseval/datamodel.hpp"
#include "courseval/exec.hpp"
#include "courseval/mcdm.hpp"
#include "courseval/sensitivity.hpp"
#include "courseval/wlc.hpp"

namespace courseval {

struct RunConfig {
    DataPaths inputs;
    std::string out_dir;
    CohortConfig cohort;
    WeightBounds bounds;
    int min_participants = 4;
    std::optional<Date> as_of; // default: latest date present in the data
    bool pool_includes_other_participants = false;
    std::vector<std::string> export_curves; // citizen ids to dump as CSV curves
    ExecPolicy policy = ExecPolicy::parallel;
};

struct Exclusion {
    std::string stage; // population / cohort / ranking
    std::string citizen_id;
    std::string course_id;
    std::string reason;
};

/// Citizens with an observable working life, each with a resolved contract
/// history, a curve up to as_of, and a matching view.
struct Population {
    Date as_of;
    std::vector<std::uint32_t> citizen_of; // slot -> dataset citizen index
    std::vector<std::vector<ResolvedContract>> contracts;
    std::vector<WorkingLifeCurve> curves;
    std::vector<PersonView> views;
    std::vector<char> enrolled; // has at least one course enrollment
    std::vector<Exclusion> notes;
    std::unordered_map<std::string, std::uint32_t> slot_by_id;
    int clipped_contracts = 0;
};

Date max_data_date(const Dataset& data);

Population build_population(const Dataset& data, std::optional<Date> as_of,
                            ExecPolicy policy);

struct RankArtifacts {
    DecisionMatrix matrix;
    Ranking ranking;
    std::vector<ParticipantScore> scores;
    std::vector<Exclusion> exclusions;
    std::map<std::string, int> k_by_course;
    std::map<std::string, int> scored_by_course; // enrollments with >= 1 p-value
    std::vector<std::string> output_files;
};

/// Full analysis: population, per-course control groups, criteria scoring,
/// interval ranking, reports. Writes all artifacts into config.out_dir.
/// Throws std::runtime_error when no course survives the participation
/// threshold.
RankArtifacts run_rank(const Dataset& data, const RunConfig& config);

/// Ingest-level checks: rejected rows, per-dataset counts, and a
/// reported-vs-recomputed career length comparison.
void run_validate(const Dataset& data, const RunConfig& config, std::ostream& console);

/// Sweep driver against a stored decision matrix; writes sensitivity.csv and
/// sensitivity_notes.txt next to it.
SweepResult run_sensitivity(const std::string& matrix_csv, const std::string& out_dir,
                            const SweepConfig& config, ExecPolicy policy);

/// Rebuilds the derived summaries (quartile and family reports) from stored
/// artifacts and prints an overview.
void run_report(const std::string& out_dir, std::ostream& console);

// Shared report builders (exposed for tests).

struct QuartileRow {
    int quartile = 0;
    int courses = 0;
    int students = 0;
    double pct_students = 0.0; // of all scored students
};

std::vector<QuartileRow> quartile_report(const Ranking& ranking,
                                         const std::map<std::string, int>& students_by_course);

void write_quartile_report_csv(std::ostream& os, std::span<const QuartileRow> rows);

/// Per professional family: how many ranked courses landed in each quartile.
std::map<std::string, std::array<int, 4>>
family_quartiles(const Ranking& ranking, const std::map<std::string, std::string>& family_of);

void write_family_quartiles_csv(std::ostream& os,
                                const std::map<std::string, std::array<int, 4>>& table);

std::uint64_t fnv1a64_file(const std::string& path);

} // namespace courseval
