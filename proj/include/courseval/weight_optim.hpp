#pragma once

#include <functional>
#include <span>
#include <vector>

namespace courseval {

/// Bounded slice of the weight simplex: {w : sum w = 1, lower <= w <= upper}.
/// Construction validates 0 < lower_j <= upper_j <= 1 componentwise and
/// sum(lower) <= 1 <= sum(upper), so the region is never empty.
class WeightRegion {
public:
    WeightRegion(std::vector<double> lower, std::vector<double> upper);
    static WeightRegion uniform(std::size_t m, double lo, double hi);

    std::size_t dim() const { return lower_.size(); }
    std::span<const double> lower() const { return lower_; }
    std::span<const double> upper() const { return upper_; }

    /// Interior point: lower bounds plus the remaining mass spread
    /// proportionally to the per-coordinate slack.
    std::vector<double> centroid() const;

    /// Largest constraint violation of w: |sum - 1| and box overshoot.
    double violation(std::span<const double> w) const;

    bool contains(std::span<const double> w, double tol = 1e-9) const {
        return violation(w) <= tol;
    }

    /// True when the constraints pin the region to a single point.
    bool is_point(double tol = 1e-12) const;

    /// Deterministic multistart set: corner points that push each coordinate
    /// to its extremes plus the centroid, deduplicated, at most `count`.
    std::vector<std::vector<double>> start_points(std::size_t count = 8) const;

private:
    /// Corner of the region biased toward coordinate j (push_up) or away
    /// from it; remaining mass is assigned greedily by ascending index.
    std::vector<double> corner(std::size_t j, bool push_up) const;

    std::vector<double> lower_, upper_;
};

struct MinimizeOptions {
    double rho_begin = 0.05; // initial trust-region radius
    double rho_end = 1e-8;   // stop once the radius shrinks below this
    int max_evals = 4000;    // per descent run
};

struct MinimizeResult {
    std::vector<double> w;
    double value = 0.0;
    int evals = 0;
};

/// Derivative-free constrained minimization of f over the region.
/// Runs a linear-model trust-region descent from every start point (the step
/// subproblem is solved exactly on the box-plus-sum polytope), then applies a
/// coordinate-exchange polish around the incumbent. Fully deterministic.
MinimizeResult minimize_over_region(const std::function<double(std::span<const double>)>& f,
                                    const WeightRegion& region,
                                    const MinimizeOptions& opts = {});

} // namespace courseval
