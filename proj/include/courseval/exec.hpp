#pragma once

namespace courseval {

/// Execution policy for the data-parallel kernels. Every kernel has a serial
/// reference path and an OpenMP path; both produce byte-identical results
/// because parallel iterations only ever write disjoint output slots and all
/// floating-point reductions run serially in fixed index order.
enum class ExecPolicy { serial, parallel };

int max_threads();

/// n > 0 pins the OpenMP thread count (and disables dynamic adjustment);
/// n <= 0 leaves the runtime default in place.
void set_threads(int n);

} // namespace courseval
