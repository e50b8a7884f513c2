#include "courseval/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace courseval::stats {

double mean(std::span<const double> xs) {
    if (xs.empty())
        throw std::invalid_argument("mean: empty input");
    double s = 0.0;
    for (const double x : xs)
        s += x;
    return s / static_cast<double>(xs.size());
}

double sample_sd(std::span<const double> xs) {
    if (xs.size() < 2)
        throw std::invalid_argument("sample_sd: need at least two values");
    const double m = mean(xs);
    double ss = 0.0;
    for (const double x : xs)
        ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double population_sd(std::span<const double> xs) {
    if (xs.empty())
        throw std::invalid_argument("population_sd: empty input");
    const double m = mean(xs);
    double ss = 0.0;
    for (const double x : xs)
        ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size()));
}

namespace {

// Continued fraction for the incomplete beta function, modified Lentz scheme.
double beta_cf(double x, double a, double b) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;

    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny)
        d = kTiny;
    d = 1.0 / d;
    double h = d;

    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny)
            d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny)
            c = kTiny;
        d = 1.0 / d;
        h *= d * c;

        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny)
            d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny)
            c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps)
            break;
    }
    return h;
}

} // namespace

double regularized_incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("regularized_incomplete_beta: a, b must be positive");
    if (std::isnan(x))
        throw std::invalid_argument("regularized_incomplete_beta: x is NaN");
    if (x <= 0.0)
        return 0.0;
    if (x >= 1.0)
        return 1.0;

    const double log_front = a * std::log(x) + b * std::log1p(-x) -
                             (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
    const double front = std::exp(log_front);

    // Use the continued fraction on the side where it converges fast.
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_cf(x, a, b) / a;
    return 1.0 - front * beta_cf(1.0 - x, b, a) / b;
}

double student_t_cdf(double t, double dof) {
    if (!(dof > 0.0))
        throw std::invalid_argument("student_t_cdf: dof must be positive");
    if (std::isnan(t))
        throw std::invalid_argument("student_t_cdf: t is NaN");
    if (std::isinf(t))
        return t > 0.0 ? 1.0 : 0.0;
    const double x = dof / (t * t + dof);
    const double tail = 0.5 * regularized_incomplete_beta(x, 0.5 * dof, 0.5);
    return t >= 0.0 ? 1.0 - tail : tail;
}

} // namespace courseval::stats
