#include "courseval/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace courseval::kernels {

PointSet curves_to_points(std::span<const WorkingLifeCurve* const> curves,
                          std::int32_t upto, std::int32_t stride) {
    if (upto < 1)
        throw std::invalid_argument("curves_to_points: upto must be >= 1");
    if (stride < 1)
        throw std::invalid_argument("curves_to_points: stride must be >= 1");

    std::size_t dim = 0;
    for (std::int32_t t = 1; t <= upto; t += stride)
        ++dim;

    PointSet points;
    points.n = curves.size();
    points.dim = dim;
    points.values.resize(points.n * points.dim);
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const WorkingLifeCurve& c = *curves[i];
        if (upto > c.length_days)
            throw std::invalid_argument("curves_to_points: curve shorter than upto");
        double* row = points.mutable_row(i);
        std::size_t k = 0;
        for (std::int32_t t = 1; t <= upto; t += stride)
            row[k++] = c.value(t);
    }
    return points;
}

double euclidean(std::span<const double> a, std::span<const double> b) {
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        ss += d * d;
    }
    return std::sqrt(ss);
}

DistanceMatrix pairwise_distances(const PointSet& points, ExecPolicy policy) {
    const std::size_t n = points.n;
    DistanceMatrix dm(n);

    const auto fill_row = [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j)
            dm.set(i, j, euclidean(points.row(i), points.row(j)));
    };

    if (policy == ExecPolicy::parallel) {
        const std::int64_t in = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < in; ++i)
            fill_row(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i)
            fill_row(i);
    }
    return dm;
}

std::vector<double> distances_to_subject(const WorkingLifeCurve& subject,
                                         std::span<const WorkingLifeCurve* const> candidates,
                                         std::int32_t upto, std::int32_t stride,
                                         ExecPolicy policy) {
    std::vector<double> out(candidates.size(), 0.0);

    const auto compute = [&](std::size_t i) {
        out[i] = curve_distance(subject, *candidates[i], upto, stride);
    };

    if (policy == ExecPolicy::parallel) {
        const std::int64_t n = static_cast<std::int64_t>(candidates.size());
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i)
            compute(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < candidates.size(); ++i)
            compute(i);
    }
    return out;
}

} // namespace courseval::kernels
