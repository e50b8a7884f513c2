// Deterministic matrix fixtures shared by the oracle generator (which
// freezes dense-grid score intervals into tests/data/) and the checks that
// compare the interval optimizer against those frozen values. Both sides
// must regenerate identical matrices, so keep this header in sync with the
// committed CSV: regenerate the data file whenever anything here changes.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "courseval/mcdm.hpp"
#include "courseval/rng.hpp"

namespace fixtures {

inline constexpr int kOracleMatrixCount = 50;
inline constexpr double kOracleLower = 0.1;
inline constexpr double kOracleUpper = 0.8;
inline constexpr double kOracleGridStep = 1e-4;

/// Matrix i: two criteria for the first half, three for the second; 4 to 6
/// alternatives; values in [1, 10]; a random mix of cost and benefit columns
/// (never all-cost or all-benefit by construction of the fixed seeds is not
/// guaranteed, and does not need to be).
inline courseval::DecisionMatrix oracle_matrix(int i) {
    courseval::Rng rng(1000u + static_cast<std::uint64_t>(i));
    const std::size_t cols = i < kOracleMatrixCount / 2 ? 2 : 3;
    const std::size_t rows = 4 + static_cast<std::size_t>(i) % 3;

    courseval::DecisionMatrix m;
    for (std::size_t r = 0; r < rows; ++r)
        m.alternatives.push_back("alt" + std::to_string(r));
    for (std::size_t c = 0; c < cols; ++c) {
        m.criteria.push_back("c" + std::to_string(c));
        m.directions.push_back(rng.bernoulli(0.5) ? courseval::Direction::cost
                                                  : courseval::Direction::benefit);
    }
    for (std::size_t v = 0; v < rows * cols; ++v)
        m.values.push_back(rng.uniform(1.0, 10.0));
    return m;
}

inline std::vector<courseval::DecisionMatrix> oracle_matrices() {
    std::vector<courseval::DecisionMatrix> out;
    out.reserve(kOracleMatrixCount);
    for (int i = 0; i < kOracleMatrixCount; ++i)
        out.push_back(oracle_matrix(i));
    return out;
}

} // namespace fixtures
