#pragma once

#include "uqbench/integrands.hpp"
#include "uqbench/points.hpp"

#include <cstddef>

namespace uqbench {

inline constexpr std::size_t kStarDiscrepancy2dCap = 512;

/// Exact star discrepancy in d=1: 1/(2n) + max_i |x_(i) - (2i-1)/(2n)|.
double star_discrepancy_1d(const PointSet& ps);

/// Exact star discrepancy in d=2 by enumerating anchored boxes whose upper
/// corner lies on the grid of point coordinates (plus 1), with open counts
/// for the volume-excess side and closed counts for the point-excess side.
/// Duplicates count with multiplicity.
double star_discrepancy_2d(const PointSet& ps, std::size_t cap = kStarDiscrepancy2dCap);

struct VariationEstimate {
    double value = 0.0;
    std::size_t grid_size = 0; // number of intervals in the final grid
    bool converged = false;
};

/// Total variation of a d=1 integrand from sums of |f(t_{k+1}) - f(t_k)| on
/// uniform grids over [0,1], doubling the grid until the relative change is
/// below 1e-6 or `grid_cap` intervals are reached.
VariationEstimate hk_variation_1d(const Integrand& f, std::size_t grid_size = 1024,
                                  std::size_t grid_cap = std::size_t{1} << 20);

struct KoksmaHlawkaCheck {
    double error = 0.0;       // |equal-weight average - exact mean|
    double discrepancy = 0.0;
    double variation = 0.0;
    double bound = 0.0;       // discrepancy * variation
    bool holds = false;       // error <= bound + 1e-9
};

/// d=1 only. Uses the integrand's known variation when present, otherwise
/// hk_variation_1d.
KoksmaHlawkaCheck koksma_hlawka_check(const Integrand& f, const PointSet& ps);

} // namespace uqbench
