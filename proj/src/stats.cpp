#include "uqbench/stats.hpp"

#include "uqbench/errors.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <string>

namespace uqbench {

namespace {

void require_probability(double p, const char* what)
{
    if (!(p > 0.0 && p < 1.0))
        throw ValidationError(std::string(what) + " must lie in (0, 1), got " + std::to_string(p));
}

} // namespace

double normal_quantile(double p)
{
    require_probability(p, "probability");
    return boost::math::quantile(boost::math::normal_distribution<double>(0.0, 1.0), p);
}

double student_t_quantile(double df, double p)
{
    require_probability(p, "probability");
    if (!(df > 0.0)) throw ValidationError("Student-t degrees of freedom must be positive");
    return boost::math::quantile(boost::math::students_t_distribution<double>(df), p);
}

double quantile_type7(std::span<const double> sorted, double p)
{
    if (sorted.empty()) throw ValidationError("quantile of an empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("quantile level must lie in [0, 1]");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

ProportionBand wilson_interval(std::size_t hits, std::size_t trials, double confidence)
{
    if (trials == 0) return {0.0, 1.0};
    const double z = normal_quantile(0.5 + confidence / 2.0);
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(hits) / n;
    const double denom = 1.0 + z * z / n;
    const double centre = (phat + z * z / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z * z / (4.0 * n * n)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

ProportionBand binomial_acceptance_band(std::size_t trials, double p, double confidence)
{
    if (trials == 0) throw ValidationError("binomial band needs at least one trial");
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("binomial p must lie in [0, 1]");
    const double tail = (1.0 - confidence) / 2.0;
    const boost::math::binomial_distribution<double> dist(static_cast<double>(trials), p);
    // k_lo: smallest k with P(X < k) > tail is one past the largest k with
    // P(X <= k - 1) <= tail.
    std::size_t k_lo = 0;
    while (k_lo < trials && boost::math::cdf(dist, static_cast<double>(k_lo)) <= tail) ++k_lo;
    std::size_t k_hi = trials;
    while (k_hi > 0 && boost::math::cdf(boost::math::complement(dist, static_cast<double>(k_hi - 1))) <= tail)
        --k_hi;
    const double n = static_cast<double>(trials);
    return {static_cast<double>(k_lo) / n, static_cast<double>(k_hi) / n};
}

double ls_slope(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("slope fit needs >= 2 paired values");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw ValidationError("slope fit needs distinct x values");
    return sxy / sxx;
}

} // namespace uqbench
