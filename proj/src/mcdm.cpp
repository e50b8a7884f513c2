#include "courseval/mcdm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "courseval/csv.hpp"

namespace courseval {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

double parse_double(const std::string& s, const char* what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::runtime_error(std::string("cannot parse ") + what + ": '" + s + "'");
    return v;
}

} // namespace

void DecisionMatrix::validate() const {
    if (alternatives.empty())
        throw std::invalid_argument("decision matrix: no alternatives");
    if (criteria.empty())
        throw std::invalid_argument("decision matrix: no criteria");
    if (directions.size() != criteria.size())
        throw std::invalid_argument("decision matrix: direction count mismatch");
    if (values.size() != rows() * cols())
        throw std::invalid_argument("decision matrix: value count mismatch");
    for (const double v : values)
        if (!std::isfinite(v))
            throw std::invalid_argument("decision matrix: non-finite value");
    for (std::size_t j = 0; j < cols(); ++j) {
        double norm = 0.0;
        for (std::size_t i = 0; i < rows(); ++i)
            norm += at(i, j) * at(i, j);
        if (norm == 0.0)
            throw std::invalid_argument("decision matrix: column '" + criteria[j] +
                                        "' is all zero");
    }
}

void write_decision_matrix_csv(std::ostream& os, const DecisionMatrix& m) {
    os << "alternative";
    for (const std::string& c : m.criteria)
        os << ',' << csv::escape(c);
    os << '\n';
    os << "direction";
    for (const Direction d : m.directions)
        os << ',' << (d == Direction::cost ? "cost" : "benefit");
    os << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << csv::escape(m.alternatives[i]);
        for (std::size_t j = 0; j < m.cols(); ++j)
            os << ',' << fmt_double(m.at(i, j));
        os << '\n';
    }
}

DecisionMatrix read_decision_matrix_csv(const std::string& path) {
    const csv::Table table = csv::read_file(path);
    if (table.header.empty() || table.header[0] != "alternative")
        throw std::runtime_error("decision matrix csv: first column must be 'alternative'");
    if (table.rows.empty() || table.rows[0][0] != "direction")
        throw std::runtime_error("decision matrix csv: missing 'direction' row");

    DecisionMatrix m;
    m.criteria.assign(table.header.begin() + 1, table.header.end());
    for (std::size_t j = 1; j < table.rows[0].size(); ++j) {
        const std::string& d = table.rows[0][j];
        if (d == "cost")
            m.directions.push_back(Direction::cost);
        else if (d == "benefit")
            m.directions.push_back(Direction::benefit);
        else
            throw std::runtime_error("decision matrix csv: bad direction '" + d + "'");
    }
    for (std::size_t r = 1; r < table.rows.size(); ++r) {
        m.alternatives.push_back(table.rows[r][0]);
        for (std::size_t j = 1; j < table.rows[r].size(); ++j)
            m.values.push_back(parse_double(table.rows[r][j], "matrix value"));
    }
    m.validate();
    return m;
}

NormalizedMatrix normalize(const DecisionMatrix& m) {
    m.validate();
    NormalizedMatrix nm;
    nm.n_rows = m.rows();
    nm.n_cols = m.cols();
    nm.r.resize(nm.n_rows * nm.n_cols);
    nm.best.resize(nm.n_cols);
    nm.worst.resize(nm.n_cols);
    for (std::size_t j = 0; j < nm.n_cols; ++j) {
        double ss = 0.0;
        for (std::size_t i = 0; i < nm.n_rows; ++i)
            ss += m.at(i, j) * m.at(i, j);
        const double norm = std::sqrt(ss);
        double mn = std::numeric_limits<double>::infinity();
        double mx = -mn;
        for (std::size_t i = 0; i < nm.n_rows; ++i) {
            const double r = m.at(i, j) / norm;
            nm.r[i * nm.n_cols + j] = r;
            mn = std::min(mn, r);
            mx = std::max(mx, r);
        }
        if (m.directions[j] == Direction::benefit) {
            nm.best[j] = mx;
            nm.worst[j] = mn;
        } else {
            nm.best[j] = mn;
            nm.worst[j] = mx;
        }
    }
    return nm;
}

double topsis_score(const NormalizedMatrix& nm, std::size_t row, std::span<const double> w) {
    if (w.size() != nm.n_cols)
        throw std::invalid_argument("topsis_score: weight size mismatch");
    double dp = 0.0, dm = 0.0;
    for (std::size_t j = 0; j < nm.n_cols; ++j) {
        const double r = nm.at(row, j);
        const double wp = w[j] * (r - nm.best[j]);
        const double wm = w[j] * (r - nm.worst[j]);
        dp += wp * wp;
        dm += wm * wm;
    }
    dp = std::sqrt(dp);
    dm = std::sqrt(dm);
    const double denom = dp + dm;
    if (denom == 0.0)
        return 0.5; // every alternative identical on every criterion
    return dm / denom;
}

std::vector<double> classical_topsis(const DecisionMatrix& m, std::span<const double> weights) {
    const NormalizedMatrix nm = normalize(m);
    std::vector<double> scores(nm.n_rows);
    for (std::size_t i = 0; i < nm.n_rows; ++i)
        scores[i] = topsis_score(nm, i, weights);
    return scores;
}

void WeightBounds::validate(std::size_t m) const {
    if (m == 0)
        throw std::invalid_argument("weight bounds: no criteria");
    if (!(lower > 0.0) || lower > upper || upper > 1.0)
        throw std::invalid_argument("weight bounds: need 0 < lower <= upper <= 1");
    if (lower * static_cast<double>(m) > 1.0 + 1e-12 ||
        upper * static_cast<double>(m) < 1.0 - 1e-12)
        throw std::invalid_argument("weight bounds: no weight vector can sum to 1");
    if (!(k1 >= 0.0) || !(k1 <= 1.0))
        throw std::invalid_argument("weight bounds: k1 must lie in [0, 1]");
}

ScoreInterval score_interval(const NormalizedMatrix& nm, std::size_t row,
                             const WeightRegion& region) {
    const auto low = minimize_over_region(
        [&](std::span<const double> w) { return topsis_score(nm, row, w); }, region);
    const auto high = minimize_over_region(
        [&](std::span<const double> w) { return -topsis_score(nm, row, w); }, region);
    ScoreInterval interval;
    interval.r_min = low.value;
    interval.r_max = -high.value;
    if (interval.r_max < interval.r_min) // numerically flat score landscape
        std::swap(interval.r_min, interval.r_max);
    return interval;
}

int interval_compare(const ScoreInterval& a, const ScoreInterval& b, double k1) {
    constexpr double kTol = 1e-9;
    const double ma = a.mixed(k1);
    const double mb = b.mixed(k1);
    if (std::fabs(ma - mb) > kTol)
        return ma > mb ? 1 : -1;
    if (std::fabs(a.r_min - b.r_min) > kTol)
        return a.r_min > b.r_min ? 1 : -1;
    return 0;
}

Ranking order_intervals(std::span<const std::string> labels,
                        std::span<const ScoreInterval> intervals, double k1) {
    if (labels.size() != intervals.size())
        throw std::invalid_argument("order_intervals: label/interval size mismatch");
    const std::size_t n = labels.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const int cmp = interval_compare(intervals[a], intervals[b], k1);
        if (cmp != 0)
            return cmp > 0;
        return labels[a] < labels[b];
    });

    Ranking ranking;
    ranking.k1 = k1;
    const std::size_t block = (n + 3) / 4; // quartiles as position blocks
    for (std::size_t p = 0; p < n; ++p) {
        const std::size_t i = order[p];
        RankedAlternative row;
        row.label = labels[i];
        row.r_min = intervals[i].r_min;
        row.r_max = intervals[i].r_max;
        row.mixed = intervals[i].mixed(k1);
        row.position = static_cast<int>(p + 1);
        row.quartile = static_cast<int>(std::min<std::size_t>(4, p / block + 1));
        ranking.rows.push_back(std::move(row));
    }
    return ranking;
}

Ranking rank_alternatives(const DecisionMatrix& m, const WeightBounds& bounds,
                          ExecPolicy policy) {
    bounds.validate(m.cols());
    const NormalizedMatrix nm = normalize(m);
    const WeightRegion region = WeightRegion::uniform(m.cols(), bounds.lower, bounds.upper);

    std::vector<ScoreInterval> intervals(nm.n_rows);
    const auto compute = [&](std::size_t i) { intervals[i] = score_interval(nm, i, region); };

    if (policy == ExecPolicy::parallel) {
        const std::int64_t n = static_cast<std::int64_t>(nm.n_rows);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < n; ++i)
            compute(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < nm.n_rows; ++i)
            compute(i);
    }
    return order_intervals(m.alternatives, intervals, bounds.k1);
}

void write_ranking_csv(std::ostream& os, const Ranking& ranking) {
    os << "alternative,r_min,r_max,uw,position,quartile\n";
    for (const RankedAlternative& row : ranking.rows) {
        os << csv::escape(row.label) << ',' << fmt_double(row.r_min) << ','
           << fmt_double(row.r_max) << ',' << fmt_double(row.mixed) << ',' << row.position
           << ',' << row.quartile << '\n';
    }
}

Ranking read_ranking_csv(const std::string& path) {
    const csv::Table table = csv::read_file(path);
    const std::vector<std::string> expected = {"alternative", "r_min", "r_max",
                                               "uw",          "position", "quartile"};
    if (table.header != expected)
        throw std::runtime_error("ranking csv: unexpected header in " + path);
    Ranking ranking;
    for (const auto& row : table.rows) {
        RankedAlternative r;
        r.label = row[0];
        r.r_min = parse_double(row[1], "r_min");
        r.r_max = parse_double(row[2], "r_max");
        r.mixed = parse_double(row[3], "uw");
        r.position = static_cast<int>(parse_double(row[4], "position"));
        r.quartile = static_cast<int>(parse_double(row[5], "quartile"));
        ranking.rows.push_back(std::move(r));
    }
    return ranking;
}

} // namespace courseval
