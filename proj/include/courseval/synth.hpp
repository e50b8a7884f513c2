#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "courseval/datamodel.hpp"
#include "courseval/dates.hpp"

namespace courseval {

/// Configuration for the synthetic administrative extract. Careers are daily
/// two-state (idle/employed) Markov chains per citizen; finishing a course
/// adds `effect` to that citizen's daily idle-to-employed probability from
/// the completion day on, so planted effects propagate into real outcome
/// differences.
struct SynthConfig {
    int n_citizens = 1000;
    int n_courses = 10;
    double participant_share = 0.15;
    double employment_rate = 0.5;    // long-run target share of employed days
    double permanent_share = 0.2;    // probability a contract is permanent
    double missing_end_share = 0.25; // contracts emitted without an end date
    std::vector<std::pair<std::string, double>> course_effects; // id -> boost
    std::uint64_t seed = 1;

    int birth_year_min = 1960;
    int birth_year_max = 1990;
    Date window_end = Date::from_ymd(2023, 6, 30); // extract as-of date
    std::int32_t completion_guard_days = 400; // keep outcome windows observable

    void validate() const;
};

struct SynthResult {
    DataPaths paths;
    std::vector<std::string> files; // every file written
};

/// Writes courses.csv, ds1_studies.csv, ds2_course_records.csv,
/// ds3_citizens.csv, ds4_contracts.csv (plus truth.csv echoing the planted
/// effects) into out_dir. Byte-identical for identical configurations; the
/// generated extract ingests with zero rejected rows.
SynthResult generate_synthetic(const SynthConfig& config, const std::string& out_dir);

} // namespace courseval
