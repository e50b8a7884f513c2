#include "courseval/wlc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace courseval {

Date determine_origin(std::span<const StudyRecord> studies,
                      std::span<const ContractRecord> contracts) {
    bool have_contract = false;
    Date first_start;
    for (const ContractRecord& c : contracts) {
        if (!have_contract || c.start_date < first_start) {
            first_start = c.start_date;
            have_contract = true;
        }
    }

    bool have_study = false;
    Date last_study_end;
    for (const StudyRecord& s : studies) {
        if (s.study_type == StudyType::training_course)
            continue;
        if (!have_study || s.end_date > last_study_end) {
            last_study_end = s.end_date;
            have_study = true;
        }
    }

    if (!have_contract && !have_study)
        throw NoWorkingLifeError("citizen has no contracts and no regulated studies");
    if (!have_contract)
        return last_study_end;
    if (!have_study)
        return first_start;
    return std::min(first_start, last_study_end);
}

Date determine_origin(const Dataset& data, std::uint32_t citizen) {
    std::vector<StudyRecord> studies;
    for (const std::uint32_t s : data.studies_by_citizen[citizen])
        studies.push_back(data.studies[s]);
    std::vector<ContractRecord> contracts;
    for (const std::uint32_t c : data.contracts_by_citizen[citizen])
        contracts.push_back(data.contracts[c]);
    return determine_origin(studies, contracts);
}

WorkingLifeCurve build_curve(std::string citizen_id, Date origin,
                             std::span<const ResolvedContract> contracts, Date as_of,
                             int* clipped_contracts) {
    if (as_of < origin)
        throw std::invalid_argument("build_curve: as_of before origin");

    WorkingLifeCurve curve;
    curve.citizen_id = std::move(citizen_id);
    curve.origin = origin;
    curve.length_days = as_of - origin + 1;

    // Difference array over day indices 1..length; union of inclusive
    // intervals, so overlapping contracts never double-count a day.
    std::vector<std::int32_t> diff(static_cast<std::size_t>(curve.length_days) + 2, 0);
    int clipped = 0;
    for (const ResolvedContract& c : contracts) {
        std::int32_t lo = c.start - origin + 1;
        std::int32_t hi = c.end - origin + 1;
        if (lo < 1) {
            ++clipped;
            lo = 1;
        }
        if (hi > curve.length_days)
            hi = curve.length_days;
        if (hi < lo)
            continue; // entirely outside the observed window
        diff[static_cast<std::size_t>(lo)] += 1;
        diff[static_cast<std::size_t>(hi) + 1] -= 1;
    }
    if (clipped_contracts)
        *clipped_contracts = clipped;

    curve.cumulative.resize(static_cast<std::size_t>(curve.length_days) + 1);
    curve.values.resize(static_cast<std::size_t>(curve.length_days));
    curve.cumulative[0] = 0;
    std::int32_t open = 0;
    std::int32_t total = 0;
    for (std::int32_t t = 1; t <= curve.length_days; ++t) {
        open += diff[static_cast<std::size_t>(t)];
        if (open > 0)
            ++total;
        curve.cumulative[static_cast<std::size_t>(t)] = total;
        curve.values[static_cast<std::size_t>(t) - 1] =
            static_cast<double>(total) / static_cast<double>(t);
    }
    return curve;
}

double curve_distance(const WorkingLifeCurve& a, const WorkingLifeCurve& b,
                      std::int32_t upto, std::int32_t stride) {
    if (upto < 1)
        throw std::invalid_argument("curve_distance: upto must be >= 1");
    if (stride < 1)
        throw std::invalid_argument("curve_distance: stride must be >= 1");
    if (upto > a.length_days || upto > b.length_days)
        throw std::invalid_argument("curve_distance: upto exceeds a curve length");
    double ss = 0.0;
    for (std::int32_t t = 1; t <= upto; t += stride) {
        const double d = a.value(t) - b.value(t);
        ss += d * d;
    }
    return std::sqrt(ss);
}

void write_curve_csv(std::ostream& os, const WorkingLifeCurve& curve) {
    os << "day,value\n";
    char buf[40];
    for (std::int32_t t = 1; t <= curve.length_days; ++t) {
        std::snprintf(buf, sizeof(buf), "%d,%.12g\n", t, curve.value(t));
        os << buf;
    }
}

} // namespace courseval
