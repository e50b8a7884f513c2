// Times the serial reference implementations against the OpenMP kernels and
// confirms both produce identical results. Run it manually after performance
// work; it is not part of the test suite.

#include <chrono>
#include <cstdio>
#include <vector>

#include "courseval/exec.hpp"
#include "courseval/kernels.hpp"
#include "courseval/mcdm.hpp"
#include "courseval/rng.hpp"

using namespace courseval;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

template <typename F>
double timed(F&& f, int repeats = 3) {
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        const auto start = std::chrono::steady_clock::now();
        f();
        best = std::min(best, seconds_since(start));
    }
    return best;
}

void bench_pairwise() {
    const std::size_t n = 400, dim = 2000;
    kernels::PointSet points;
    points.n = n;
    points.dim = dim;
    points.values.resize(n * dim);
    Rng rng(7);
    for (double& v : points.values)
        v = rng.uniform();

    kernels::DistanceMatrix serial, parallel;
    const double t_serial =
        timed([&] { serial = kernels::pairwise_distances(points, ExecPolicy::serial); });
    const double t_parallel = timed(
        [&] { parallel = kernels::pairwise_distances(points, ExecPolicy::parallel); });

    bool identical = serial.size() == parallel.size();
    for (std::size_t i = 0; identical && i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (serial(i, j) != parallel(i, j)) {
                identical = false;
                break;
            }
    std::printf("pairwise_distances  %4zu pts x %4zu dims   serial %7.3fs   openmp %7.3fs   x%.2f   %s\n",
                n, dim, t_serial, t_parallel, t_serial / t_parallel,
                identical ? "identical" : "MISMATCH");
}

void bench_ranking() {
    const std::size_t n_alt = 120, n_crit = 4;
    DecisionMatrix m;
    Rng rng(11);
    for (std::size_t i = 0; i < n_alt; ++i)
        m.alternatives.push_back("alt" + std::to_string(i));
    for (std::size_t j = 0; j < n_crit; ++j) {
        m.criteria.push_back("c" + std::to_string(j));
        m.directions.push_back(j % 2 ? Direction::cost : Direction::benefit);
    }
    m.values.resize(n_alt * n_crit);
    for (double& v : m.values)
        v = rng.uniform(0.05, 1.0);

    const WeightBounds bounds;
    Ranking serial, parallel;
    const double t_serial =
        timed([&] { serial = rank_alternatives(m, bounds, ExecPolicy::serial); }, 1);
    const double t_parallel =
        timed([&] { parallel = rank_alternatives(m, bounds, ExecPolicy::parallel); }, 1);

    bool identical = serial.rows.size() == parallel.rows.size();
    for (std::size_t i = 0; identical && i < serial.rows.size(); ++i) {
        const auto& a = serial.rows[i];
        const auto& b = parallel.rows[i];
        if (a.label != b.label || a.r_min != b.r_min || a.r_max != b.r_max ||
            a.position != b.position)
            identical = false;
    }
    std::printf("rank_alternatives   %4zu alternatives        serial %7.3fs   openmp %7.3fs   x%.2f   %s\n",
                n_alt, t_serial, t_parallel, t_serial / t_parallel,
                identical ? "identical" : "MISMATCH");
}

} // namespace

int main() {
    std::printf("threads available: %d\n", max_threads());
    bench_pairwise();
    bench_ranking();
    return 0;
}
