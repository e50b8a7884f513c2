#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "courseval/exec.hpp"
#include "courseval/weight_optim.hpp"

namespace courseval {

enum class Direction : std::uint8_t { benefit, cost };

struct DecisionMatrix {
    std::vector<std::string> alternatives;  // row labels
    std::vector<std::string> criteria;      // column labels
    std::vector<Direction> directions;      // per column
    std::vector<double> values;             // row-major

    std::size_t rows() const { return alternatives.size(); }
    std::size_t cols() const { return criteria.size(); }
    double at(std::size_t i, std::size_t j) const { return values[i * cols() + j]; }

    /// Throws std::invalid_argument on shape mismatch, non-finite values, or
    /// an all-zero column (vector normalization would divide by zero).
    void validate() const;
};

/// CSV layout: header "alternative,<criteria...>", one "direction" row of
/// cost/benefit tags, then one row per alternative.
void write_decision_matrix_csv(std::ostream& os, const DecisionMatrix& m);
DecisionMatrix read_decision_matrix_csv(const std::string& path);

/// Column-normalized matrix (each column divided by its Euclidean norm) with
/// the per-column best and worst normalized values resolved by direction.
/// Keeping this a distinct type avoids normalizing twice by accident.
struct NormalizedMatrix {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<double> r;     // row-major, in [0, 1] columnwise
    std::vector<double> best;  // per column: ideal normalized value
    std::vector<double> worst; // per column: anti-ideal normalized value

    double at(std::size_t i, std::size_t j) const { return r[i * n_cols + j]; }
};

NormalizedMatrix normalize(const DecisionMatrix& m);

/// Relative closeness of row i under weights w: d- / (d- + d+) where d+/d-
/// are weighted Euclidean distances to the per-column best/worst values.
/// The degenerate 0/0 case (all alternatives identical) scores 0.5.
double topsis_score(const NormalizedMatrix& nm, std::size_t row, std::span<const double> w);

/// Fixed-weight scores for all rows (the classical method).
std::vector<double> classical_topsis(const DecisionMatrix& m, std::span<const double> weights);

/// Uniform weight bounds applied to every criterion plus the mixing factor
/// k1 that turns a score interval into a scalar (k1 on the lower endpoint,
/// 1 - k1 on the upper).
struct WeightBounds {
    double lower = 0.1;
    double upper = 0.6;
    double k1 = 0.5;

    void validate(std::size_t m) const;
};

struct ScoreInterval {
    double r_min = 0.0;
    double r_max = 0.0;

    double mixed(double k1) const { return k1 * r_min + (1.0 - k1) * r_max; }
};

/// Extremes of the closeness score of one row over all weight vectors in the
/// region.
ScoreInterval score_interval(const NormalizedMatrix& nm, std::size_t row,
                             const WeightRegion& region);

/// Ordering of two score intervals: higher mixed value first, higher lower
/// endpoint on near-ties (1e-9), 0 when still tied.
int interval_compare(const ScoreInterval& a, const ScoreInterval& b, double k1);

struct RankedAlternative {
    std::string label;
    double r_min = 0.0;
    double r_max = 0.0;
    double mixed = 0.0;
    int position = 0; // 1-based
    int quartile = 0; // 1..4 by position blocks of ceil(n/4)
};

struct Ranking {
    double k1 = 0.5;
    std::vector<RankedAlternative> rows; // by position
};

/// Orders precomputed intervals (labels break remaining ties) and assigns
/// positions and quartiles.
Ranking order_intervals(std::span<const std::string> labels,
                        std::span<const ScoreInterval> intervals, double k1);

/// Full pipeline for one matrix: normalize, compute every row's score
/// interval over the bounds region (rows fan out in parallel), order.
Ranking rank_alternatives(const DecisionMatrix& m, const WeightBounds& bounds,
                          ExecPolicy policy = ExecPolicy::parallel);

void write_ranking_csv(std::ostream& os, const Ranking& ranking);
Ranking read_ranking_csv(const std::string& path);

} // namespace courseval
