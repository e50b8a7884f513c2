#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "courseval/datamodel.hpp"
#include "courseval/dates.hpp"

namespace courseval {

/// Employability outcomes measured over a fixed window after course
/// completion. mean_gap_days is the only one where smaller raw values are
/// better for the person.
enum class Criterion : std::uint8_t {
    days_employed,  // C1: days with at least one active contract
    days_permanent, // C2: days covered by permanent contracts
    days_in_family, // C3: days working in the course's professional family
    mean_gap_days,  // C4: mean idle stretch between employment spells
};

inline constexpr std::array<Criterion, 4> kAllCriteria = {
    Criterion::days_employed,
    Criterion::days_permanent,
    Criterion::days_in_family,
    Criterion::mean_gap_days,
};

constexpr bool higher_is_better(Criterion c) { return c != Criterion::mean_gap_days; }

std::string_view criterion_name(Criterion c);

/// Raw outcome of one criterion for one person. The window covers the
/// `horizon` days after day t_i on the person's own clock (days t_i+1 ..
/// t_i+horizon inclusive). Overlapping or back-to-back contracts are merged
/// into spells first. With no employment in the window mean_gap_days is the
/// whole horizon; with employment and no interruption it is zero.
double criterion_value(std::span<const ResolvedContract> contracts, Date origin,
                       std::int32_t t_i, std::int32_t horizon,
                       ProfessionalFamily course_family, Criterion which);

/// One-sided one-sample t-test of the control values against the subject's
/// outcome. Small p means the subject did better than its controls in the
/// direction that favours the subject. Requires at least two control values.
/// With zero control variance the p-value degenerates to 0 (subject strictly
/// better), 1 (strictly worse) or 0.5 (equal).
double outcome_pvalue(double subject_value, std::span<const double> control_values,
                      bool subject_higher_better);

struct ParticipantScore {
    std::string citizen_id;
    std::string course_id;
    Criterion criterion = Criterion::days_employed;
    double raw_value = 0.0;
    /// NaN when the participant could not be tested (control group below
    /// two members).
    double p_value = 0.0;
    int control_n = 0;
};

struct CoursePerformance {
    std::string course_id;
    std::array<double, 4> mean_p{};  // indexed by Criterion order
    std::array<int, 4> n_scored{};   // participants contributing per criterion
};

/// Mean p-value per criterion over this course's testable participants.
/// Returns nullopt (with `reason` filled when given) if any criterion has
/// fewer than min_participants scored participants.
std::optional<CoursePerformance> course_performance(std::string course_id,
                                                    std::span<const ParticipantScore> scores,
                                                    int min_participants,
                                                    std::string* reason = nullptr);

} // namespace courseval
