#include "courseval/sensitivity.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace courseval {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::vector<double> linspace(double a, double b, int steps) {
    std::vector<double> out;
    if (steps <= 1) {
        out.push_back(a);
        return out;
    }
    for (int i = 0; i < steps; ++i)
        out.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(steps - 1));
    return out;
}

std::unordered_map<std::string, const RankedAlternative*> by_label(const Ranking& r) {
    std::unordered_map<std::string, const RankedAlternative*> map;
    for (const RankedAlternative& row : r.rows)
        if (!map.emplace(row.label, &row).second)
            throw std::invalid_argument("ranking has duplicate label: " + row.label);
    return map;
}

} // namespace

void SweepConfig::validate() const {
    if (grid_steps < 1)
        throw std::invalid_argument("sweep config: grid_steps must be >= 1");
    if (l_min > l_max || u_min > u_max || k1_min > k1_max)
        throw std::invalid_argument("sweep config: range minimum exceeds maximum");
    if (!(l_min > 0.0) || u_max > 1.0)
        throw std::invalid_argument("sweep config: bounds must stay inside (0, 1]");
    if (k1_min < 0.0 || k1_max > 1.0)
        throw std::invalid_argument("sweep config: k1 must stay inside [0, 1]");
    if (!(baseline_l > 0.0) || baseline_l > baseline_u || baseline_u > 1.0)
        throw std::invalid_argument("sweep config: bad baseline bounds");
    if (baseline_k1 < 0.0 || baseline_k1 > 1.0)
        throw std::invalid_argument("sweep config: bad baseline k1");
}

double mapd(const Ranking& baseline, const Ranking& variant, std::size_t* skipped) {
    if (baseline.rows.size() != variant.rows.size())
        throw std::invalid_argument("mapd: rankings differ in size");
    const auto base = by_label(baseline);
    double sum = 0.0;
    std::size_t counted = 0, zero_base = 0;
    for (const RankedAlternative& row : variant.rows) {
        const auto it = base.find(row.label);
        if (it == base.end())
            throw std::invalid_argument("mapd: label missing from baseline: " + row.label);
        const double b = it->second->mixed;
        if (b == 0.0) {
            ++zero_base;
            continue;
        }
        sum += std::fabs(row.mixed - b) / std::fabs(b);
        ++counted;
    }
    if (skipped)
        *skipped = zero_base;
    return counted ? sum / static_cast<double>(counted) : 0.0;
}

int kendall_distance(const Ranking& a, const Ranking& b) {
    if (a.rows.size() != b.rows.size())
        throw std::invalid_argument("kendall_distance: rankings differ in size");
    const auto bmap = by_label(b);
    std::vector<std::pair<int, int>> positions; // (pos in a, pos in b)
    positions.reserve(a.rows.size());
    for (const RankedAlternative& row : a.rows) {
        const auto it = bmap.find(row.label);
        if (it == bmap.end())
            throw std::invalid_argument("kendall_distance: label missing: " + row.label);
        positions.emplace_back(row.position, it->second->position);
    }
    int discordant = 0;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        for (std::size_t j = i + 1; j < positions.size(); ++j) {
            const long da = positions[i].first - positions[j].first;
            const long db = positions[i].second - positions[j].second;
            if (da * db < 0)
                ++discordant;
        }
    }
    return discordant;
}

double average_position_difference(const Ranking& a, const Ranking& b) {
    if (a.rows.size() != b.rows.size())
        throw std::invalid_argument("average_position_difference: rankings differ in size");
    if (a.rows.empty())
        return 0.0;
    const auto bmap = by_label(b);
    double sum = 0.0;
    for (const RankedAlternative& row : a.rows) {
        const auto it = bmap.find(row.label);
        if (it == bmap.end())
            throw std::invalid_argument("average_position_difference: label missing: " +
                                        row.label);
        sum += std::fabs(static_cast<double>(row.position - it->second->position));
    }
    return sum / static_cast<double>(a.rows.size());
}

SweepResult sweep(const DecisionMatrix& matrix, const SweepConfig& config,
                  ExecPolicy policy) {
    config.validate();
    matrix.validate();

    WeightBounds baseline_bounds{config.baseline_l, config.baseline_u, config.baseline_k1};
    baseline_bounds.validate(matrix.cols());
    const Ranking baseline = rank_alternatives(matrix, baseline_bounds, policy);

    // The baseline intervals double as the k1-sweep input: k1 only changes
    // how intervals are mixed and ordered, never the intervals themselves.
    std::vector<std::string> labels;
    std::vector<ScoreInterval> intervals;
    for (const RankedAlternative& row : baseline.rows) {
        labels.push_back(row.label);
        intervals.push_back({row.r_min, row.r_max});
    }

    SweepResult result;
    const auto add_row = [&](std::string param_set, double l, double u, double k1,
                             const Ranking& variant) {
        std::size_t skipped = 0;
        SweepRow row;
        row.param_set = std::move(param_set);
        row.l = l;
        row.u = u;
        row.k1 = k1;
        row.mapd = mapd(baseline, variant, &skipped);
        row.kendall = kendall_distance(baseline, variant);
        row.avg_pos_diff = average_position_difference(baseline, variant);
        if (skipped)
            result.notes.push_back(row.param_set + " l=" + fmt_double(l) + " u=" +
                                   fmt_double(u) + " k1=" + fmt_double(k1) + ": " +
                                   std::to_string(skipped) +
                                   " zero-baseline alternatives excluded from mapd");
        result.rows.push_back(std::move(row));
    };

    for (const double l : linspace(config.l_min, config.l_max, config.grid_steps)) {
        for (const double u : linspace(config.u_min, config.u_max, config.grid_steps)) {
            WeightBounds wb{l, u, config.baseline_k1};
            try {
                wb.validate(matrix.cols());
            } catch (const std::invalid_argument& e) {
                result.notes.push_back("bounds l=" + fmt_double(l) + " u=" + fmt_double(u) +
                                       " skipped: " + e.what());
                continue;
            }
            add_row("bounds", l, u, config.baseline_k1,
                    rank_alternatives(matrix, wb, policy));
        }
    }
    for (const double k1 : linspace(config.k1_min, config.k1_max, config.grid_steps)) {
        add_row("k1", config.baseline_l, config.baseline_u, k1,
                order_intervals(labels, intervals, k1));
    }
    return result;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
    os << "param_set,l,u,k1,mapd,kendall,avg_pos_diff\n";
    for (const SweepRow& row : result.rows) {
        os << row.param_set << ',' << fmt_double(row.l) << ',' << fmt_double(row.u) << ','
           << fmt_double(row.k1) << ',' << fmt_double(row.mapd) << ',' << row.kendall << ','
           << fmt_double(row.avg_pos_diff) << '\n';
    }
}

} // namespace courseval
