#include "uqbench/discrepancy.hpp"

#include "uqbench/errors.hpp"
#include "uqbench/format.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace uqbench {

double star_discrepancy_1d(const PointSet& ps)
{
    if (ps.d != 1) throw ValidationError("star_discrepancy_1d needs d=1, got d=" + std::to_string(ps.d));
    if (ps.n == 0) throw ValidationError("star discrepancy of an empty point set");
    std::vector<double> x(ps.coords);
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(ps.n);
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        worst = std::max(worst, std::abs(x[i] - (2.0 * static_cast<double>(i) + 1.0) / (2.0 * n)));
    return 1.0 / (2.0 * n) + worst;
}

double star_discrepancy_2d(const PointSet& ps, std::size_t cap)
{
    if (ps.d != 2) throw ValidationError("star_discrepancy_2d needs d=2, got d=" + std::to_string(ps.d));
    if (ps.n == 0) throw ValidationError("star discrepancy of an empty point set");
    if (ps.n > cap)
        throw ValidationError("star_discrepancy_2d: n=" + std::to_string(ps.n) + " exceeds the cap of " +
                              std::to_string(cap) +
                              "; use d=1 or an estimator with a probabilistic error statement instead");

    const std::size_t n = ps.n;
    std::vector<std::array<double, 2>> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = {ps(i, 0), ps(i, 1)};
    std::sort(pts.begin(), pts.end());

    std::vector<double> ys;
    ys.reserve(n + 1);
    for (const auto& p : pts) ys.push_back(p[1]);
    ys.push_back(1.0);
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

    std::vector<double> xs;
    xs.reserve(n + 1);
    for (const auto& p : pts) xs.push_back(p[0]);
    xs.push_back(1.0);
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    // Sweep a over xs; `open` holds y of points with x < a, `closed` with x <= a.
    std::vector<double> open, closed;
    std::size_t next = 0;
    const double inv_n = 1.0 / static_cast<double>(n);
    double worst = 0.0;
    for (double a : xs) {
        for (; next < n && pts[next][0] < a; ++next)
            open.insert(std::upper_bound(open.begin(), open.end(), pts[next][1]), pts[next][1]);
        closed = open;
        for (std::size_t k = next; k < n && pts[k][0] == a; ++k)
            closed.insert(std::upper_bound(closed.begin(), closed.end(), pts[k][1]), pts[k][1]);
        for (double b : ys) {
            const double vol = a * b;
            const auto n_open = static_cast<double>(std::lower_bound(open.begin(), open.end(), b) - open.begin());
            const auto n_closed = static_cast<double>(std::upper_bound(closed.begin(), closed.end(), b) - closed.begin());
            worst = std::max({worst, vol - n_open * inv_n, n_closed * inv_n - vol});
        }
    }
    return worst;
}

namespace {

double grid_variation(const Integrand& f, std::size_t intervals)
{
    double total = 0.0;
    double prev = 0.0;
    std::array<double, 1> x{};
    for (std::size_t k = 0; k <= intervals; ++k) {
        x[0] = static_cast<double>(k) / static_cast<double>(intervals);
        const double v = f(x);
        if (!std::isfinite(v))
            throw NumericalError("integrand '" + f.name + "' is not finite at x=" + format_roundtrip(x[0]));
        if (k > 0) total += std::abs(v - prev);
        prev = v;
    }
    return total;
}

} // namespace

VariationEstimate hk_variation_1d(const Integrand& f, std::size_t grid_size, std::size_t grid_cap)
{
    if (f.dim != 1) throw ValidationError("hk_variation_1d needs a d=1 integrand");
    if (grid_size < 1) throw ValidationError("variation grid needs at least one interval");
    VariationEstimate r;
    r.grid_size = std::min(grid_size, std::max<std::size_t>(grid_cap, 1));
    r.value = grid_variation(f, r.grid_size);
    while (r.grid_size * 2 <= grid_cap) {
        const double next = grid_variation(f, r.grid_size * 2);
        const double change = std::abs(next - r.value);
        r.grid_size *= 2;
        r.value = next;
        if (change <= 1e-6 * std::abs(next)) {
            r.converged = true;
            break;
        }
    }
    return r;
}

KoksmaHlawkaCheck koksma_hlawka_check(const Integrand& f, const PointSet& ps)
{
    if (f.dim != 1 || ps.d != 1) throw ValidationError("Koksma-Hlawka check is implemented for d=1");
    if (!f.exact_mean) throw ValidationError("integrand '" + f.name + "' has no exact mean");
    KoksmaHlawkaCheck c;
    double sum = 0.0;
    for (std::size_t i = 0; i < ps.n; ++i) sum += f(ps.point(i));
    c.error = std::abs(sum / static_cast<double>(ps.n) - *f.exact_mean);
    c.discrepancy = star_discrepancy_1d(ps);
    c.variation = f.hk_variation ? *f.hk_variation : hk_variation_1d(f).value;
    c.bound = c.discrepancy * c.variation;
    c.holds = c.error <= c.bound + 1e-9;
    return c;
}

} // namespace uqbench
