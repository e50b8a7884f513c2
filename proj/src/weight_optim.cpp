#include "courseval/weight_optim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace courseval {

WeightRegion::WeightRegion(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.empty() || lower_.size() != upper_.size())
        throw std::invalid_argument("weight region: bounds size mismatch");
    double sum_lo = 0.0, sum_hi = 0.0;
    for (std::size_t i = 0; i < lower_.size(); ++i) {
        if (!(lower_[i] > 0.0) || lower_[i] > upper_[i] || upper_[i] > 1.0)
            throw std::invalid_argument("weight region: need 0 < lower <= upper <= 1");
        sum_lo += lower_[i];
        sum_hi += upper_[i];
    }
    if (sum_lo > 1.0 + 1e-12 || sum_hi < 1.0 - 1e-12)
        throw std::invalid_argument(
            "weight region: no weight vector inside the bounds sums to 1");
}

WeightRegion WeightRegion::uniform(std::size_t m, double lo, double hi) {
    return WeightRegion(std::vector<double>(m, lo), std::vector<double>(m, hi));
}

std::vector<double> WeightRegion::centroid() const {
    const std::size_t m = dim();
    double sum_lo = 0.0, slack = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sum_lo += lower_[i];
        slack += upper_[i] - lower_[i];
    }
    std::vector<double> w(lower_.begin(), lower_.end());
    const double mass = std::max(0.0, 1.0 - sum_lo);
    if (slack > 0.0 && mass > 0.0)
        for (std::size_t i = 0; i < m; ++i)
            w[i] += mass * (upper_[i] - lower_[i]) / slack;
    return w;
}

double WeightRegion::violation(std::span<const double> w) const {
    if (w.size() != dim())
        return std::numeric_limits<double>::infinity();
    double sum = 0.0;
    double v = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        sum += w[i];
        v = std::max(v, lower_[i] - w[i]);
        v = std::max(v, w[i] - upper_[i]);
    }
    return std::max(v, std::fabs(sum - 1.0));
}

bool WeightRegion::is_point(double tol) const {
    double sum_lo = 0.0, sum_hi = 0.0;
    std::size_t movable = 0;
    for (std::size_t i = 0; i < dim(); ++i) {
        sum_lo += lower_[i];
        sum_hi += upper_[i];
        if (upper_[i] - lower_[i] > tol)
            ++movable;
    }
    // All slack used up by the lower bounds, no room under the upper bounds,
    // or at most one coordinate free (then the sum pins it too).
    return movable <= 1 || 1.0 - sum_lo <= tol || sum_hi - 1.0 <= tol;
}

std::vector<double> WeightRegion::corner(std::size_t j, bool push_up) const {
    const std::size_t m = dim();
    std::vector<double> w(lower_.begin(), lower_.end());
    double mass = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        mass += lower_[i];
    mass = std::max(0.0, 1.0 - mass);

    const auto give = [&](std::size_t i) {
        const double take = std::min(upper_[i] - w[i], mass);
        if (take > 0.0) {
            w[i] += take;
            mass -= take;
        }
    };
    if (push_up) {
        give(j);
        for (std::size_t i = 0; i < m && mass > 0.0; ++i)
            if (i != j)
                give(i);
    } else {
        for (std::size_t i = 0; i < m && mass > 0.0; ++i)
            if (i != j)
                give(i);
        give(j);
    }
    return w;
}

std::vector<std::vector<double>> WeightRegion::start_points(std::size_t count) const {
    if (count == 0)
        count = 1;
    std::vector<std::vector<double>> starts;
    const auto push_unique = [&](std::vector<double> w) {
        for (const auto& have : starts) {
            double diff = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i)
                diff = std::max(diff, std::fabs(have[i] - w[i]));
            if (diff <= 1e-12)
                return;
        }
        starts.push_back(std::move(w));
    };

    if (is_point()) {
        push_unique(centroid());
        return starts;
    }

    // Corners first (they carry the extremes), centroid last.
    for (std::size_t j = 0; j < dim() && starts.size() + 1 < count; ++j) {
        push_unique(corner(j, true));
        if (starts.size() + 1 < count)
            push_unique(corner(j, false));
    }
    push_unique(centroid());
    if (starts.size() > count)
        starts.resize(count);
    return starts;
}

namespace {

/// Free coordinates after eliminating one dependent movable coordinate and
/// pinning coordinates with no slack.
struct ReducedSpace {
    std::vector<std::size_t> free_idx;
    std::size_t dep_idx = 0;
    std::vector<double> base; // full-dimensional template with pinned values
    double pinned_mass = 0.0;
    std::vector<double> lo, hi; // per free coordinate
    double sum_lo = 0.0, sum_hi = 0.0;

    static ReducedSpace make(const WeightRegion& region) {
        ReducedSpace rs;
        const auto lower = region.lower();
        const auto upper = region.upper();
        std::vector<std::size_t> movable;
        rs.base.assign(lower.begin(), lower.end());
        for (std::size_t i = 0; i < region.dim(); ++i) {
            if (upper[i] - lower[i] > 1e-14)
                movable.push_back(i);
            else
                rs.pinned_mass += lower[i];
        }
        rs.dep_idx = movable.back();
        movable.pop_back();
        rs.free_idx = movable;
        for (const std::size_t i : rs.free_idx) {
            rs.lo.push_back(lower[i]);
            rs.hi.push_back(upper[i]);
        }
        rs.sum_lo = 1.0 - rs.pinned_mass - upper[rs.dep_idx];
        rs.sum_hi = 1.0 - rs.pinned_mass - lower[rs.dep_idx];
        return rs;
    }

    void expand(std::span<const double> x, std::vector<double>& w) const {
        w = base;
        double sum = 0.0;
        for (std::size_t f = 0; f < free_idx.size(); ++f) {
            w[free_idx[f]] = x[f];
            sum += x[f];
        }
        w[dep_idx] = 1.0 - pinned_mass - sum;
    }

    std::vector<double> reduce(std::span<const double> w) const {
        std::vector<double> x(free_idx.size());
        for (std::size_t f = 0; f < free_idx.size(); ++f)
            x[f] = w[free_idx[f]];
        return x;
    }
};

/// Exact minimizer of g . d over {lo <= d <= hi, s_lo <= sum d <= s_hi}:
/// start at the unconstrained box optimum, then repair the sum with the
/// cheapest adjustments first (continuous knapsack).
std::vector<double> lp_step(std::span<const double> g, std::span<const double> lo,
                            std::span<const double> hi, double s_lo, double s_hi) {
    const std::size_t n = g.size();
    std::vector<double> d(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (g[i] > 0.0)
            d[i] = lo[i];
        else if (g[i] < 0.0)
            d[i] = hi[i];
        else
            d[i] = std::clamp(0.0, lo[i], hi[i]);
        sum += d[i];
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;

    if (sum < s_lo) {
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (g[a] != g[b])
                return g[a] < g[b];
            return a < b;
        });
        double need = s_lo - sum;
        for (const std::size_t i : order) {
            const double room = hi[i] - d[i];
            if (room <= 0.0)
                continue;
            const double add = std::min(room, need);
            d[i] += add;
            need -= add;
            if (need <= 0.0)
                break;
        }
    } else if (sum > s_hi) {
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (g[a] != g[b])
                return g[a] > g[b];
            return a < b;
        });
        double need = sum - s_hi;
        for (const std::size_t i : order) {
            const double room = d[i] - lo[i];
            if (room <= 0.0)
                continue;
            const double take = std::min(room, need);
            d[i] -= take;
            need -= take;
            if (need <= 0.0)
                break;
        }
    }
    return d;
}

/// Gaussian elimination with partial pivoting; false when near-singular.
bool solve_linear(std::vector<double> a, std::vector<double> b, std::size_t n,
                  std::vector<double>& x) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::fabs(a[col * n + col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::fabs(a[r * n + col]);
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best < 1e-14)
            return false;
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c)
                std::swap(a[col * n + c], a[pivot * n + c]);
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a[r * n + col] / a[col * n + col];
            if (factor == 0.0)
                continue;
            for (std::size_t c = col; c < n; ++c)
                a[r * n + c] -= factor * a[col * n + c];
            b[r] -= factor * b[col];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double v = b[r];
        for (std::size_t c = r + 1; c < n; ++c)
            v -= a[r * n + c] * x[c];
        x[r] = v / a[r * n + r];
    }
    return true;
}

} // namespace

MinimizeResult minimize_over_region(const std::function<double(std::span<const double>)>& f,
                                    const WeightRegion& region,
                                    const MinimizeOptions& opts) {
    MinimizeResult result;
    result.value = std::numeric_limits<double>::infinity();

    if (region.is_point()) {
        result.w = region.centroid();
        result.value = f(result.w);
        result.evals = 1;
        return result;
    }

    const ReducedSpace rs = ReducedSpace::make(region);
    const std::size_t n = rs.free_idx.size(); // >= 1 here

    std::vector<double> w_scratch(region.dim());
    const auto eval_x = [&](std::span<const double> x) {
        rs.expand(x, w_scratch);
        const double v = f(w_scratch);
        ++result.evals;
        if (v < result.value) {
            result.value = v;
            result.w = w_scratch;
        }
        return v;
    };

    const std::vector<double> cx = rs.reduce(region.centroid());

    const auto descent = [&](std::vector<double> x_start) {
        int run_evals = 0;
        const auto eval_counted = [&](std::span<const double> x) {
            ++run_evals;
            return eval_x(x);
        };

        double rho = opts.rho_begin;
        std::vector<std::vector<double>> y(n + 1, std::vector<double>(n));
        std::vector<double> fy(n + 1);
        bool fresh = false;

        const auto rebuild = [&](std::vector<double> center) {
            // Pull slightly toward the interior so no direction is blocked.
            const double pull = std::min(0.01, rho);
            double center_sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                center[j] += pull * (cx[j] - center[j]);
                center_sum += center[j];
            }
            y[0] = center;
            fy[0] = eval_counted(y[0]);
            for (std::size_t j = 0; j < n; ++j) {
                const double up = std::min(rs.hi[j] - center[j], rs.sum_hi - center_sum);
                const double down = std::min(center[j] - rs.lo[j], center_sum - rs.sum_lo);
                const double dir = up >= down ? 1.0 : -1.0;
                const double step = std::min(rho, std::max(up, down));
                y[j + 1] = center;
                y[j + 1][j] += dir * step;
                fy[j + 1] = eval_counted(y[j + 1]);
            }
            fresh = true;
        };

        rebuild(std::move(x_start));

        std::vector<double> a(n * n), rhs(n), g;
        std::vector<double> step_lo(n), step_hi(n);
        bool just_rebuilt = true;
        while (run_evals < opts.max_evals && rho >= opts.rho_end) {
            std::size_t b = 0;
            for (std::size_t j = 1; j <= n; ++j)
                if (fy[j] < fy[b])
                    b = j;

            std::size_t row = 0;
            for (std::size_t j = 0; j <= n; ++j) {
                if (j == b)
                    continue;
                for (std::size_t c = 0; c < n; ++c)
                    a[row * n + c] = y[j][c] - y[b][c];
                rhs[row] = fy[j] - fy[b];
                ++row;
            }
            if (!solve_linear(a, rhs, n, g)) {
                if (just_rebuilt) {
                    rho /= 3.0;
                    if (rho < opts.rho_end)
                        break;
                }
                rebuild(y[b]);
                just_rebuilt = true;
                continue;
            }

            double yb_sum = 0.0;
            for (std::size_t c = 0; c < n; ++c)
                yb_sum += y[b][c];
            for (std::size_t c = 0; c < n; ++c) {
                step_lo[c] = std::max(rs.lo[c] - y[b][c], -rho);
                step_hi[c] = std::min(rs.hi[c] - y[b][c], rho);
            }
            const std::vector<double> d =
                lp_step(g, step_lo, step_hi, rs.sum_lo - yb_sum, rs.sum_hi - yb_sum);
            double pred = 0.0;
            for (std::size_t c = 0; c < n; ++c)
                pred += g[c] * d[c];

            if (pred >= -1e-13 * (1.0 + std::fabs(fy[b]))) {
                if (!fresh) {
                    rebuild(y[b]);
                    just_rebuilt = true;
                    continue;
                }
                rho /= 3.0;
                if (rho < opts.rho_end)
                    break;
                rebuild(y[b]);
                just_rebuilt = true;
                continue;
            }

            std::vector<double> x_new = y[b];
            for (std::size_t c = 0; c < n; ++c)
                x_new[c] += d[c];
            const double f_new = eval_counted(x_new);
            just_rebuilt = false;

            std::size_t worst = 0;
            for (std::size_t j = 1; j <= n; ++j)
                if (fy[j] > fy[worst])
                    worst = j;
            if (f_new < fy[worst]) {
                y[worst] = std::move(x_new);
                fy[worst] = f_new;
                fresh = false;
            } else if (!fresh) {
                rebuild(y[b]);
                just_rebuilt = true;
            } else {
                rho /= 3.0;
                if (rho < opts.rho_end)
                    break;
                rebuild(y[b]);
                just_rebuilt = true;
            }
        }
    };

    for (const auto& start : region.start_points(8)) {
        const std::vector<double> x = rs.reduce(start);
        eval_x(x); // the exact corner might be the optimum
        descent(x);
    }

    // Coordinate-exchange polish in the full space around the incumbent.
    const auto lower = region.lower();
    const auto upper = region.upper();
    std::vector<std::size_t> movable;
    for (std::size_t i = 0; i < region.dim(); ++i)
        if (upper[i] - lower[i] > 1e-14)
            movable.push_back(i);

    std::vector<double> w = result.w;
    double fv = result.value;
    constexpr std::array<double, 8> kDeltas = {3e-3, 1e-3, 3e-4, 1e-4,
                                               3e-5, 1e-5, 3e-6, 1e-6};
    std::vector<double> w2;
    for (const double delta : kDeltas) {
        bool improved = true;
        while (improved) {
            improved = false;
            for (const std::size_t i : movable) {
                for (const std::size_t j : movable) {
                    if (i == j)
                        continue;
                    if (w[i] + delta > upper[i] + 1e-15 || w[j] - delta < lower[j] - 1e-15)
                        continue;
                    w2 = w;
                    w2[i] += delta;
                    w2[j] -= delta;
                    const double f2 = f(w2);
                    ++result.evals;
                    if (f2 < fv) {
                        w = w2;
                        fv = f2;
                        improved = true;
                    }
                }
            }
        }
    }
    if (fv < result.value) {
        result.value = fv;
        result.w = w;
    }
    return result;
}

} // namespace courseval
