#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "courseval/exec.hpp"
#include "courseval/wlc.hpp"

namespace courseval::kernels {

/// Dense row-major set of points in R^dim.
struct PointSet {
    std::size_t n = 0;
    std::size_t dim = 0;
    std::vector<double> values; // n * dim

    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * dim, dim};
    }
    double* mutable_row(std::size_t i) { return values.data() + i * dim; }
};

/// Samples curve values at days 1, 1+stride, ... <= upto into point rows.
/// All curves must span at least `upto` days.
PointSet curves_to_points(std::span<const WorkingLifeCurve* const> curves,
                          std::int32_t upto, std::int32_t stride = 1);

/// Symmetric distance matrix with zero diagonal, stored densely.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double v) {
        d_[i * n_ + j] = v;
        d_[j * n_ + i] = v;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> d_;
};

double euclidean(std::span<const double> a, std::span<const double> b);

/// Pairwise Euclidean distances between all points. The parallel path splits
/// work by row; each iteration writes only its own row pair, so results are
/// identical for any thread count.
DistanceMatrix pairwise_distances(const PointSet& points,
                                  ExecPolicy policy = ExecPolicy::parallel);

/// Distance from one subject curve to every candidate curve over days
/// 1..upto sampled every `stride` days. Output slot i belongs to candidate i.
std::vector<double> distances_to_subject(const WorkingLifeCurve& subject,
                                         std::span<const WorkingLifeCurve* const> candidates,
                                         std::int32_t upto, std::int32_t stride = 1,
                                         ExecPolicy policy = ExecPolicy::parallel);

} // namespace courseval::kernels
