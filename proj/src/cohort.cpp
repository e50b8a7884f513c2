#include "courseval/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace courseval {

void CohortConfig::validate() const {
    if (horizon_days < 1)
        throw std::invalid_argument("cohort config: horizon_days must be >= 1");
    if (age_window_years < 0)
        throw std::invalid_argument("cohort config: age_window_years must be >= 0");
    if (nn_cap < 1)
        throw std::invalid_argument("cohort config: nn_cap must be >= 1");
    if (sample_size < 1)
        throw std::invalid_argument("cohort config: sample_size must be >= 1");
    if (k_override && *k_override < 1)
        throw std::invalid_argument("cohort config: k_override must be >= 1");
    if (gap_k_max < 1)
        throw std::invalid_argument("cohort config: gap_k_max must be >= 1");
    if (gap_n_refs < 1)
        throw std::invalid_argument("cohort config: gap_n_refs must be >= 1");
    if (stride < 1)
        throw std::invalid_argument("cohort config: stride must be >= 1");
}

EducationLevel PersonView::education_at(Date at) const {
    EducationLevel level = EducationLevel::none;
    for (const auto& [date, step] : education_steps) {
        if (date > at)
            break;
        level = step; // steps carry the cumulative max
    }
    return level;
}

int PersonView::age_years_at(Date at) const {
    int years = at.year() - birth.year();
    const unsigned am = at.month();
    const unsigned ad = at.day_of_month();
    const unsigned bm = birth.month();
    const unsigned bd = birth.day_of_month();
    if (am < bm || (am == bm && ad < bd))
        --years;
    return years;
}

std::vector<std::pair<Date, EducationLevel>>
education_steps_from(std::span<const StudyRecord> studies) {
    std::vector<std::pair<Date, EducationLevel>> raw;
    for (const StudyRecord& s : studies) {
        switch (s.study_type) {
        case StudyType::compulsory:
            raw.emplace_back(s.end_date, EducationLevel::compulsory);
            break;
        case StudyType::vocational:
            raw.emplace_back(s.end_date, EducationLevel::vocational);
            break;
        case StudyType::university:
            raw.emplace_back(s.end_date, EducationLevel::university);
            break;
        case StudyType::training_course:
            break;
        }
    }
    std::sort(raw.begin(), raw.end());
    std::vector<std::pair<Date, EducationLevel>> steps;
    EducationLevel level = EducationLevel::none;
    for (const auto& [date, step] : raw) {
        if (step <= level)
            continue;
        level = step;
        if (!steps.empty() && steps.back().first == date)
            steps.back().second = level;
        else
            steps.emplace_back(date, level);
    }
    return steps;
}

// ---------------------------------------------------------------- clustering

PamResult pam_cluster(const kernels::DistanceMatrix& d, int k) {
    const std::size_t n = d.size();
    if (k < 1 || static_cast<std::size_t>(k) > n)
        throw std::invalid_argument("pam_cluster: k out of range");

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<char> is_medoid(n, 0);
    std::vector<std::uint32_t> medoids;
    medoids.reserve(static_cast<std::size_t>(k));

    std::vector<double> dn(n, kInf); // distance to nearest medoid
    std::vector<double> ds(n, kInf); // distance to second nearest medoid
    std::vector<std::uint32_t> nearest(n, 0);

    const auto add_medoid = [&](std::uint32_t m) {
        is_medoid[m] = 1;
        medoids.push_back(m);
        for (std::size_t j = 0; j < n; ++j) {
            const double dist = d(j, m);
            if (dist < dn[j]) {
                ds[j] = dn[j];
                dn[j] = dist;
                nearest[j] = m;
            } else if (dist < ds[j]) {
                ds[j] = dist;
            }
        }
    };

    const auto refresh_neighbours = [&]() {
        for (std::size_t j = 0; j < n; ++j) {
            dn[j] = kInf;
            ds[j] = kInf;
            for (const std::uint32_t m : medoids) {
                const double dist = d(j, m);
                if (dist < dn[j]) {
                    ds[j] = dn[j];
                    dn[j] = dist;
                    nearest[j] = m;
                } else if (dist < ds[j]) {
                    ds[j] = dist;
                }
            }
        }
    };

    const auto current_cost = [&]() {
        double cost = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            cost += dn[j];
        return cost;
    };

    // Greedy build: start from the most central point, then repeatedly add
    // the point with the largest cost reduction. Strict comparisons keep the
    // smallest index on ties.
    {
        std::uint32_t best = 0;
        double best_sum = kInf;
        for (std::size_t i = 0; i < n; ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                sum += d(i, j);
            if (sum < best_sum) {
                best_sum = sum;
                best = static_cast<std::uint32_t>(i);
            }
        }
        add_medoid(best);
    }
    while (medoids.size() < static_cast<std::size_t>(k)) {
        std::uint32_t best = 0;
        double best_gain = -kInf;
        for (std::size_t i = 0; i < n; ++i) {
            if (is_medoid[i])
                continue;
            double gain = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double drop = dn[j] - d(j, i);
                if (drop > 0.0)
                    gain += drop;
            }
            if (gain > best_gain) {
                best_gain = gain;
                best = static_cast<std::uint32_t>(i);
            }
        }
        add_medoid(best);
    }

    PamResult result;
    std::sort(medoids.begin(), medoids.end());
    result.cost_history.push_back(current_cost());

    // Best-improvement swaps until no exchange lowers the cost.
    constexpr double kMinImprovement = 1e-12;
    for (;;) {
        double best_delta = 0.0;
        std::uint32_t best_m = 0, best_h = 0;
        bool found = false;
        for (const std::uint32_t m : medoids) {
            for (std::size_t h = 0; h < n; ++h) {
                if (is_medoid[h])
                    continue;
                double delta = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    const double djh = d(j, h);
                    const double nd = (nearest[j] == m) ? std::min(ds[j], djh)
                                                        : std::min(dn[j], djh);
                    delta += nd - dn[j];
                }
                if (delta < best_delta) {
                    best_delta = delta;
                    best_m = m;
                    best_h = static_cast<std::uint32_t>(h);
                    found = true;
                }
            }
        }
        if (!found || best_delta >= -kMinImprovement)
            break;
        is_medoid[best_m] = 0;
        is_medoid[best_h] = 1;
        *std::find(medoids.begin(), medoids.end(), best_m) = best_h;
        std::sort(medoids.begin(), medoids.end());
        refresh_neighbours();
        result.cost_history.push_back(current_cost());
    }

    // Final assignment; equidistant points go to the smaller medoid index.
    result.medoids = medoids;
    result.medoid_of.resize(n);
    result.total_cost = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        std::uint32_t best = medoids[0];
        double best_d = d(j, medoids[0]);
        for (std::size_t mi = 1; mi < medoids.size(); ++mi) {
            const double dist = d(j, medoids[mi]);
            if (dist < best_d) {
                best_d = dist;
                best = medoids[mi];
            }
        }
        result.medoid_of[j] = best;
        result.total_cost += best_d;
    }
    return result;
}

int gap_optimal_k(const kernels::PointSet& points, int k_max, int n_refs, const Rng& rng,
                  ExecPolicy policy) {
    if (k_max < 1)
        throw std::invalid_argument("gap_optimal_k: k_max must be >= 1");
    if (n_refs < 1)
        throw std::invalid_argument("gap_optimal_k: n_refs must be >= 1");
    const std::size_t n = points.n;
    if (n < 2)
        return 1;

    const kernels::DistanceMatrix dm = kernels::pairwise_distances(points, policy);
    double spread = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            spread = std::max(spread, dm(i, j));
    if (spread == 0.0)
        return 1;

    // k = n always has zero dispersion, which carries no information.
    const int k_hi = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(k_max), n - 1));
    if (k_hi <= 1)
        return 1;

    const auto log_dispersion = [](double w) {
        return w > 0.0 ? std::log(w) : -std::numeric_limits<double>::infinity();
    };

    std::vector<double> logw_data(static_cast<std::size_t>(k_hi) + 1, 0.0);
    for (int k = 1; k <= k_hi; ++k)
        logw_data[static_cast<std::size_t>(k)] = log_dispersion(pam_cluster(dm, k).total_cost);

    // Reference draws: uniform over the data bounding box, per coordinate.
    std::vector<double> lo(points.dim), hi(points.dim);
    for (std::size_t c = 0; c < points.dim; ++c) {
        lo[c] = std::numeric_limits<double>::infinity();
        hi[c] = -std::numeric_limits<double>::infinity();
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = points.row(i);
        for (std::size_t c = 0; c < points.dim; ++c) {
            lo[c] = std::min(lo[c], row[c]);
            hi[c] = std::max(hi[c], row[c]);
        }
    }

    std::vector<std::vector<double>> logw_ref(
        static_cast<std::size_t>(n_refs),
        std::vector<double>(static_cast<std::size_t>(k_hi) + 1, 0.0));

    const auto run_ref = [&](int b) {
        Rng r = rng.child(static_cast<std::uint64_t>(b));
        kernels::PointSet ref;
        ref.n = n;
        ref.dim = points.dim;
        ref.values.resize(n * points.dim);
        for (std::size_t i = 0; i < n; ++i) {
            double* row = ref.mutable_row(i);
            for (std::size_t c = 0; c < points.dim; ++c)
                row[c] = r.uniform(lo[c], hi[c]);
        }
        const kernels::DistanceMatrix rdm =
            kernels::pairwise_distances(ref, ExecPolicy::serial);
        auto& slot = logw_ref[static_cast<std::size_t>(b)];
        for (int k = 1; k <= k_hi; ++k)
            slot[static_cast<std::size_t>(k)] =
                log_dispersion(pam_cluster(rdm, k).total_cost);
    };

    if (policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int b = 0; b < n_refs; ++b)
            run_ref(b);
    } else {
        for (int b = 0; b < n_refs; ++b)
            run_ref(b);
    }

    std::vector<double> gap(static_cast<std::size_t>(k_hi) + 1, 0.0);
    std::vector<double> sk(static_cast<std::size_t>(k_hi) + 1, 0.0);
    for (int k = 1; k <= k_hi; ++k) {
        double m = 0.0;
        for (int b = 0; b < n_refs; ++b)
            m += logw_ref[static_cast<std::size_t>(b)][static_cast<std::size_t>(k)];
        m /= n_refs;
        double ss = 0.0;
        for (int b = 0; b < n_refs; ++b) {
            const double dev =
                logw_ref[static_cast<std::size_t>(b)][static_cast<std::size_t>(k)] - m;
            ss += dev * dev;
        }
        gap[static_cast<std::size_t>(k)] = m - logw_data[static_cast<std::size_t>(k)];
        sk[static_cast<std::size_t>(k)] =
            std::sqrt(ss / n_refs) * std::sqrt(1.0 + 1.0 / n_refs);
    }

    for (int k = 1; k < k_hi; ++k) {
        if (gap[static_cast<std::size_t>(k)] >=
            gap[static_cast<std::size_t>(k) + 1] - sk[static_cast<std::size_t>(k) + 1])
            return k;
    }
    return k_hi;
}

// ------------------------------------------------------------ control groups

std::vector<std::uint32_t> initial_control_group(const PersonView& subject,
                                                 std::int32_t t_i,
                                                 std::span<const PersonView> pool,
                                                 const CohortConfig& config) {
    if (t_i < 1)
        throw std::invalid_argument("initial_control_group: t_i must be >= 1");
    if (subject.curve->length_days < t_i)
        throw std::invalid_argument("initial_control_group: subject curve shorter than t_i");

    const Date subject_date = subject.curve->date_of_day(t_i);
    const int subject_age = subject.age_years_at(subject_date);
    const EducationLevel subject_edu = subject.education_at(subject_date);
    const std::int64_t needed =
        static_cast<std::int64_t>(t_i) + static_cast<std::int64_t>(config.horizon_days);

    std::vector<std::uint32_t> out;
    for (std::uint32_t p = 0; p < pool.size(); ++p) {
        const PersonView& cand = pool[p];
        if (cand.id == subject.id)
            continue;
        if (cand.gender != subject.gender)
            continue;
        if (static_cast<std::int64_t>(cand.curve->length_days) < needed)
            continue;
        const Date cand_date = cand.curve->date_of_day(t_i);
        const int age_diff = cand.age_years_at(cand_date) - subject_age;
        if (age_diff > config.age_window_years || -age_diff > config.age_window_years)
            continue;
        if (cand.education_at(cand_date) != subject_edu)
            continue;
        out.push_back(p);
    }
    return out;
}

CappedGroup cap_to_nearest(const PersonView& subject, std::int32_t t_i,
                           std::span<const PersonView> pool,
                           std::span<const std::uint32_t> candidates,
                           const CohortConfig& config, ExecPolicy policy) {
    std::vector<const WorkingLifeCurve*> curves;
    curves.reserve(candidates.size());
    for (const std::uint32_t p : candidates)
        curves.push_back(pool[p].curve);

    const std::vector<double> dist =
        kernels::distances_to_subject(*subject.curve, curves, t_i, config.stride, policy);

    std::vector<std::uint32_t> order(candidates.size());
    for (std::uint32_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (dist[a] != dist[b])
            return dist[a] < dist[b];
        return pool[candidates[a]].id < pool[candidates[b]].id;
    });

    const std::size_t keep = std::min<std::size_t>(order.size(),
                                                   static_cast<std::size_t>(config.nn_cap));
    CappedGroup capped;
    capped.members.reserve(keep);
    capped.distances.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) {
        capped.members.push_back(candidates[order[i]]);
        capped.distances.push_back(dist[order[i]]);
    }
    return capped;
}

int course_cluster_count(std::span<const CourseParticipant> participants,
                         std::span<const PersonView> pool, const CohortConfig& config,
                         const Rng& course_rng, ExecPolicy policy) {
    config.validate();
    if (config.k_override)
        return *config.k_override;

    std::vector<std::size_t> eligible;
    std::vector<std::vector<std::uint32_t>> initial(participants.size());
    for (std::size_t i = 0; i < participants.size(); ++i) {
        initial[i] =
            initial_control_group(*participants[i].person, participants[i].t_i, pool, config);
        if (!initial[i].empty())
            eligible.push_back(i);
    }
    if (eligible.empty())
        return 0;

    Rng sampler = course_rng.child(0x53414d50ull);
    const std::size_t take =
        std::min<std::size_t>(static_cast<std::size_t>(config.sample_size), eligible.size());
    std::vector<std::size_t> picked = sampler.sample_indices(eligible.size(), take);
    std::sort(picked.begin(), picked.end());

    std::vector<int> ks(take, 0);
    const auto run_one = [&](std::size_t slot) {
        const std::size_t idx = eligible[picked[slot]];
        const CourseParticipant& part = participants[idx];
        const CappedGroup capped = cap_to_nearest(*part.person, part.t_i, pool,
                                                  initial[idx], config, ExecPolicy::serial);
        std::vector<const WorkingLifeCurve*> curves;
        curves.reserve(capped.members.size() + 1);
        curves.push_back(part.person->curve);
        for (const std::uint32_t p : capped.members)
            curves.push_back(pool[p].curve);
        const kernels::PointSet points =
            kernels::curves_to_points(curves, part.t_i, config.stride);
        const Rng g = course_rng.child(fnv1a64(part.person->id),
                                       static_cast<std::uint64_t>(part.t_i));
        ks[slot] = gap_optimal_k(points, config.gap_k_max, config.gap_n_refs, g,
                                 ExecPolicy::serial);
    };

    if (policy == ExecPolicy::parallel) {
        const std::int64_t total = static_cast<std::int64_t>(take);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < total; ++i)
            run_one(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < take; ++i)
            run_one(i);
    }

    // Mode of the per-participant optima; ties prefer fewer clusters.
    std::map<int, std::size_t> freq;
    for (const int k : ks)
        ++freq[k];
    int best_k = 0;
    std::size_t best_count = 0;
    for (const auto& [k, count] : freq) {
        if (count > best_count) {
            best_count = count;
            best_k = k;
        }
    }
    return best_k;
}

std::optional<ControlGroup> build_control_group(const PersonView& subject,
                                                std::int32_t t_i,
                                                std::span<const PersonView> pool,
                                                int k_course, const CohortConfig& config,
                                                ExecPolicy policy) {
    if (k_course < 1)
        throw std::invalid_argument("build_control_group: k_course must be >= 1");

    const std::vector<std::uint32_t> candidates =
        initial_control_group(subject, t_i, pool, config);
    if (candidates.empty())
        return std::nullopt;

    const CappedGroup capped = cap_to_nearest(subject, t_i, pool, candidates, config, policy);

    std::vector<const WorkingLifeCurve*> curves;
    curves.reserve(capped.members.size() + 1);
    curves.push_back(subject.curve);
    for (const std::uint32_t p : capped.members)
        curves.push_back(pool[p].curve);
    const kernels::PointSet points = kernels::curves_to_points(curves, t_i, config.stride);
    const kernels::DistanceMatrix dm = kernels::pairwise_distances(points, policy);

    const int k = std::min<int>(k_course, static_cast<int>(points.n));
    const PamResult pam = pam_cluster(dm, k);

    ControlGroup group;
    group.k_used = k;
    const std::uint32_t subject_medoid = pam.medoid_of[0];
    for (std::size_t i = 1; i < points.n; ++i) {
        if (pam.medoid_of[i] == subject_medoid) {
            group.members.push_back(capped.members[i - 1]);
            group.distances.push_back(capped.distances[i - 1]);
        }
    }
    if (group.members.empty()) {
        // Subject clustered alone: fall back to its nearest capped candidates.
        group.fallback = true;
        const std::size_t take = std::min<std::size_t>(10, capped.members.size());
        for (std::size_t i = 0; i < take; ++i) {
            group.members.push_back(capped.members[i]);
            group.distances.push_back(capped.distances[i]);
        }
    }
    return group;
}

} // namespace courseval
