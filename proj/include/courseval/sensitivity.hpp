#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "courseval/exec.hpp"
#include "courseval/mcdm.hpp"

namespace courseval {

/// Grid sweep over the weight bounds and the interval mixing factor. The
/// bounds sweep is the cartesian product of the lower- and upper-bound grids
/// at the baseline k1; the k1 sweep runs at the baseline bounds.
struct SweepConfig {
    double l_min = 0.05, l_max = 0.15;
    double u_min = 0.55, u_max = 0.65;
    double k1_min = 0.3, k1_max = 0.7;
    int grid_steps = 11; // points per axis, endpoints included
    double baseline_l = 0.1;
    double baseline_u = 0.6;
    double baseline_k1 = 0.5;

    void validate() const;
};

/// Stability of the mixed scores: mean absolute deviation relative to the
/// baseline score, over alternatives whose baseline score is nonzero.
/// `skipped` (when given) receives the count of zero-baseline alternatives
/// left out. Rankings must carry the same label set.
double mapd(const Ranking& baseline, const Ranking& variant, std::size_t* skipped = nullptr);

/// Number of alternative pairs ordered differently by the two rankings.
int kendall_distance(const Ranking& a, const Ranking& b);

/// Mean absolute difference of positions per alternative.
double average_position_difference(const Ranking& a, const Ranking& b);

struct SweepRow {
    std::string param_set; // "bounds" or "k1"
    double l = 0.0, u = 0.0, k1 = 0.0;
    double mapd = 0.0;
    int kendall = 0;
    double avg_pos_diff = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<std::string> notes; // skipped grid points, excluded scores
};

/// Runs the full sweep against a decision matrix. Bounds-grid points rerun
/// the interval optimization; k1-grid points reuse the baseline intervals
/// (intervals do not depend on k1). Infeasible grid points are skipped with
/// a note.
SweepResult sweep(const DecisionMatrix& matrix, const SweepConfig& config,
                  ExecPolicy policy = ExecPolicy::parallel);

void write_sweep_csv(std::ostream& os, const SweepResult& result);

} // namespace courseval
