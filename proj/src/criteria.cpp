#include "courseval/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "courseval/stats.hpp"

namespace courseval {

std::string_view criterion_name(Criterion c) {
    switch (c) {
    case Criterion::days_employed: return "days_employed";
    case Criterion::days_permanent: return "days_permanent";
    case Criterion::days_in_family: return "days_in_family";
    case Criterion::mean_gap_days: return "mean_gap_days";
    }
    return "?";
}

namespace {

// Clips contracts matching `keep` to window days [lo, hi] on the person's
// own clock and merges them into disjoint spells. Back-to-back spells
// (next start == current end + 1) merge too, so remaining gaps are real idle
// days.
template <typename Keep>
std::vector<std::pair<std::int32_t, std::int32_t>>
merged_spells(std::span<const ResolvedContract> contracts, Date origin, std::int32_t lo,
              std::int32_t hi, Keep keep) {
    std::vector<std::pair<std::int32_t, std::int32_t>> spans;
    for (const ResolvedContract& c : contracts) {
        if (!keep(c))
            continue;
        const std::int32_t s = std::max(c.start - origin + 1, lo);
        const std::int32_t e = std::min(c.end - origin + 1, hi);
        if (s <= e)
            spans.emplace_back(s, e);
    }
    std::sort(spans.begin(), spans.end());
    std::vector<std::pair<std::int32_t, std::int32_t>> merged;
    for (const auto& [s, e] : spans) {
        if (!merged.empty() && s <= merged.back().second + 1)
            merged.back().second = std::max(merged.back().second, e);
        else
            merged.emplace_back(s, e);
    }
    return merged;
}

std::int64_t total_days(std::span<const std::pair<std::int32_t, std::int32_t>> spells) {
    std::int64_t total = 0;
    for (const auto& [s, e] : spells)
        total += e - s + 1;
    return total;
}

} // namespace

double criterion_value(std::span<const ResolvedContract> contracts, Date origin,
                       std::int32_t t_i, std::int32_t horizon,
                       ProfessionalFamily course_family, Criterion which) {
    if (t_i < 0)
        throw std::invalid_argument("criterion_value: t_i must be >= 0");
    if (horizon < 1)
        throw std::invalid_argument("criterion_value: horizon must be >= 1");
    const std::int32_t lo = t_i + 1;
    const std::int32_t hi = t_i + horizon;

    switch (which) {
    case Criterion::days_employed:
        return static_cast<double>(total_days(
            merged_spells(contracts, origin, lo, hi, [](const ResolvedContract&) {
                return true;
            })));
    case Criterion::days_permanent:
        return static_cast<double>(total_days(
            merged_spells(contracts, origin, lo, hi, [](const ResolvedContract& c) {
                return c.typology == ContractTypology::permanent;
            })));
    case Criterion::days_in_family:
        return static_cast<double>(total_days(
            merged_spells(contracts, origin, lo, hi, [&](const ResolvedContract& c) {
                return c.family == course_family;
            })));
    case Criterion::mean_gap_days: {
        const auto spells =
            merged_spells(contracts, origin, lo, hi, [](const ResolvedContract&) {
                return true;
            });
        if (spells.empty())
            return static_cast<double>(horizon);
        if (spells.size() == 1)
            return 0.0;
        std::int64_t gap_total = 0;
        for (std::size_t i = 0; i + 1 < spells.size(); ++i)
            gap_total += spells[i + 1].first - spells[i].second - 1;
        return static_cast<double>(gap_total) / static_cast<double>(spells.size() - 1);
    }
    }
    throw std::invalid_argument("criterion_value: unknown criterion");
}

double outcome_pvalue(double subject_value, std::span<const double> control_values,
                      bool subject_higher_better) {
    const std::size_t n = control_values.size();
    if (n < 2)
        throw std::invalid_argument("outcome_pvalue: need at least two control values");

    const double m = stats::mean(control_values);
    const double sd = stats::sample_sd(control_values);
    if (sd == 0.0) {
        if (subject_value == m)
            return 0.5;
        const bool subject_better = subject_higher_better ? subject_value > m : subject_value < m;
        return subject_better ? 0.0 : 1.0;
    }
    const double se = sd / std::sqrt(static_cast<double>(n));
    const double t = subject_higher_better ? (m - subject_value) / se
                                           : (subject_value - m) / se;
    return stats::student_t_cdf(t, static_cast<double>(n - 1));
}

std::optional<CoursePerformance> course_performance(std::string course_id,
                                                    std::span<const ParticipantScore> scores,
                                                    int min_participants,
                                                    std::string* reason) {
    if (min_participants < 1)
        throw std::invalid_argument("course_performance: min_participants must be >= 1");

    CoursePerformance perf;
    perf.course_id = std::move(course_id);
    std::array<double, 4> sum{};
    for (const ParticipantScore& s : scores) {
        if (s.course_id != perf.course_id)
            throw std::invalid_argument("course_performance: score from a different course");
        if (std::isnan(s.p_value))
            continue; // untestable participant
        const auto idx = static_cast<std::size_t>(s.criterion);
        sum[idx] += s.p_value;
        ++perf.n_scored[idx];
    }
    for (std::size_t i = 0; i < 4; ++i) {
        if (perf.n_scored[i] < min_participants) {
            if (reason)
                *reason = "criterion " + std::string(criterion_name(kAllCriteria[i])) +
                          " has " + std::to_string(perf.n_scored[i]) +
                          " scored participants, need " + std::to_string(min_participants);
            return std::nullopt;
        }
        perf.mean_p[i] = sum[i] / perf.n_scored[i];
    }
    return perf;
}

} // namespace courseval
