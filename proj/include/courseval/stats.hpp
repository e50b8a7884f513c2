#pragma once

#include <span>

namespace courseval::stats {

double mean(std::span<const double> xs);

/// Sample standard deviation (n - 1 denominator). Requires xs.size() >= 2.
double sample_sd(std::span<const double> xs);

/// Population standard deviation (n denominator). Requires xs.size() >= 1.
double population_sd(std::span<const double> xs);

/// Regularized incomplete beta function I_x(a, b), a > 0, b > 0,
/// evaluated with the standard continued fraction (modified Lentz).
double regularized_incomplete_beta(double x, double a, double b);

/// CDF of Student's t distribution with dof degrees of freedom.
double student_t_cdf(double t, double dof);

} // namespace courseval::stats
