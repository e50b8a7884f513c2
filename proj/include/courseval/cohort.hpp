#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "courseval/datamodel.hpp"
#include "courseval/exec.hpp"
#include "courseval/kernels.hpp"
#include "courseval/rng.hpp"
#include "courseval/wlc.hpp"

namespace courseval {

struct CohortConfig {
    std::int32_t horizon_days = 365;
    int age_window_years = 5;
    int nn_cap = 500;      // candidates kept after the nearest-neighbour cut
    int sample_size = 200; // participants sampled to pick a course's cluster count
    std::optional<int> k_override;
    int gap_k_max = 10;
    int gap_n_refs = 50;
    std::int32_t stride = 1; // curve subsampling for distances only
    std::uint64_t seed = 0;

    void validate() const; // throws std::invalid_argument
};

/// Analysis-time snapshot of one citizen: curve plus the attributes the
/// matching filter needs. Self-contained so cohort logic is testable without
/// a full dataset.
struct PersonView {
    std::string id;
    const WorkingLifeCurve* curve = nullptr;
    Gender gender = Gender::female;
    Date birth;
    /// Regulated study completions as (end date, cumulative max level),
    /// sorted by date.
    std::vector<std::pair<Date, EducationLevel>> education_steps;

    EducationLevel education_at(Date at) const;
    int age_years_at(Date at) const; // whole years, birthday-based
};

/// Builds the education step list from any mix of study records.
std::vector<std::pair<Date, EducationLevel>>
education_steps_from(std::span<const StudyRecord> studies);

// ---------------------------------------------------------------- clustering

struct PamResult {
    std::vector<std::uint32_t> medoids;   // ascending point indices
    std::vector<std::uint32_t> medoid_of; // per point, the medoid point index
    double total_cost = 0.0;
    /// Cost after the greedy build and after every accepted swap; always
    /// non-increasing.
    std::vector<double> cost_history;
};

/// Deterministic k-medoids (greedy build + best-improvement swap).
/// Ties always break toward the smaller point index. Requires 1 <= k <= n.
PamResult pam_cluster(const kernels::DistanceMatrix& d, int k);

/// Picks a cluster count by comparing clustering dispersion against uniform
/// reference draws over the data bounding box. Dispersion is the k-medoids
/// total cost. Returns the smallest k whose gap is within one adjusted
/// standard error of the next one; scans k = 1..min(k_max, n-1) and returns
/// the scan maximum when the rule never fires. Degenerate inputs (fewer than
/// two points, or all points identical) return 1.
int gap_optimal_k(const kernels::PointSet& points, int k_max, int n_refs, const Rng& rng,
                  ExecPolicy policy = ExecPolicy::parallel);

// ------------------------------------------------------------ control groups

/// Pool positions (ascending) of candidates passing the matching filter:
/// same gender, age within the window, same education level, and a curve
/// covering the subject's whole comparison window. Ages and education are
/// evaluated on each candidate's own curve clock at day t_i.
std::vector<std::uint32_t> initial_control_group(const PersonView& subject,
                                                 std::int32_t t_i,
                                                 std::span<const PersonView> pool,
                                                 const CohortConfig& config);

struct CappedGroup {
    std::vector<std::uint32_t> members; // pool positions by (distance, id) ascending
    std::vector<double> distances;      // aligned with members
};

/// Keeps the nn_cap candidates whose curves are closest to the subject over
/// days 1..t_i.
CappedGroup cap_to_nearest(const PersonView& subject, std::int32_t t_i,
                           std::span<const PersonView> pool,
                           std::span<const std::uint32_t> candidates,
                           const CohortConfig& config,
                           ExecPolicy policy = ExecPolicy::parallel);

struct CourseParticipant {
    const PersonView* person = nullptr;
    std::int32_t t_i = 0; // completion day on the participant's own clock
};

/// Cluster count k_j for one course: clusters a seeded sample of
/// participants (those with candidates) together with their capped groups
/// and takes the mode of the per-participant optima, smaller k on ties.
/// k_override short-circuits everything. Returns 0 when no participant has
/// any matching candidate.
int course_cluster_count(std::span<const CourseParticipant> participants,
                         std::span<const PersonView> pool, const CohortConfig& config,
                         const Rng& course_rng, ExecPolicy policy = ExecPolicy::parallel);

struct ControlGroup {
    std::vector<std::uint32_t> members; // pool positions
    std::vector<double> distances;      // curve distance to the subject, aligned
    int k_used = 0;
    bool fallback = false; // subject clustered alone; nearest neighbours used instead
};

/// Final control group for one participant: filter, cap, cluster with the
/// subject, keep the subject's cluster. An empty filter result yields
/// nullopt (the participant cannot be evaluated). A subject that ends up
/// alone in its cluster falls back to its 10 nearest capped candidates.
std::optional<ControlGroup> build_control_group(const PersonView& subject,
                                                std::int32_t t_i,
                                                std::span<const PersonView> pool,
                                                int k_course, const CohortConfig& config,
                                                ExecPolicy policy = ExecPolicy::parallel);

} // namespace courseval
