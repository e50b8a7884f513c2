#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "courseval/datamodel.hpp"
#include "courseval/dates.hpp"

namespace courseval {

/// Thrown when a citizen has no observable working life (no contracts and no
/// regulated studies), so no curve origin can be determined.
struct NoWorkingLifeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Cumulative employment-share curve over one citizen's working life.
/// Day t = 1 corresponds to the origin date; value(t) is the fraction of the
/// first t days spent employed, so the curve lives in [0, 1] and moves by at
/// most 1/(t+1) per day.
struct WorkingLifeCurve {
    std::string citizen_id;
    Date origin;
    std::int32_t length_days = 0;

    /// cumulative[t] = employed days among days 1..t; size length_days + 1.
    std::vector<std::int32_t> cumulative;
    /// values[t - 1] = cumulative[t] / t; size length_days.
    std::vector<double> values;

    double value(std::int32_t t) const { return values[static_cast<std::size_t>(t) - 1]; }
    bool employed_on(std::int32_t t) const { return cumulative[t] > cumulative[t - 1]; }
    Date date_of_day(std::int32_t t) const { return origin.plus_days(t - 1); }
    std::int32_t day_of_date(Date d) const { return d - origin + 1; }
};

/// Curve origin: the earlier of the first contract start and the end of the
/// last regulated study. Training courses do not count. Throws
/// NoWorkingLifeError when neither exists.
Date determine_origin(std::span<const StudyRecord> studies,
                      std::span<const ContractRecord> contracts);

/// Convenience overload over one citizen's slice of a dataset.
Date determine_origin(const Dataset& data, std::uint32_t citizen);

/// Builds the curve from resolved contracts. Employment is the union of the
/// inclusive [start, end] contract intervals; overlaps never double-count.
/// Contract days before the origin are clipped (and counted through
/// `clipped_contracts` when given); days after `as_of` are ignored.
/// Requires origin <= as_of.
WorkingLifeCurve build_curve(std::string citizen_id, Date origin,
                             std::span<const ResolvedContract> contracts, Date as_of,
                             int* clipped_contracts = nullptr);

/// Euclidean distance between two curves over days 1..upto, sampled every
/// `stride` days (always including day 1). Requires 1 <= upto <= both lengths
/// and stride >= 1.
double curve_distance(const WorkingLifeCurve& a, const WorkingLifeCurve& b,
                      std::int32_t upto, std::int32_t stride = 1);

/// Writes one curve as "day,value" rows.
void write_curve_csv(std::ostream& os, const WorkingLifeCurve& curve);

} // namespace courseval
