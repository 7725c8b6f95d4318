#pragma once

#include <cstddef>
#include <span>

namespace uqbench {

/// Inverse standard normal CDF; p in (0, 1).
double normal_quantile(double p);

/// Inverse Student-t CDF with df degrees of freedom; p in (0, 1).
double student_t_quantile(double df, double p);

/// Hyndman-Fan type 7 quantile of an ascending-sorted sample.
double quantile_type7(std::span<const double> sorted, double p);

/// Welford accumulator. Feeding n copies of c gives mean() == c exactly and
/// variance() == 0 exactly, which zero-width intervals rely on.
class RunningStats {
public:
    void push(double x)
    {
        ++n_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
    }
    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    /// Unbiased sample variance (n - 1 denominator); 0 when n < 2.
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct ProportionBand {
    double lo = 0.0;
    double hi = 1.0;
};

/// Wilson score interval for `hits` successes out of `trials`.
ProportionBand wilson_interval(std::size_t hits, std::size_t trials, double confidence = 0.95);

/// Exact central acceptance region for the observed proportion when the
/// true one is p: [k_lo/R, k_hi/R] with P(X < k_lo) <= a/2 and
/// P(X > k_hi) <= a/2 for X ~ Binomial(R, p), a = 1 - confidence.
ProportionBand binomial_acceptance_band(std::size_t trials, double p, double confidence = 0.95);

/// Least-squares slope of y on x.
double ls_slope(std::span<const double> x, std::span<const double> y);

} // namespace uqbench
