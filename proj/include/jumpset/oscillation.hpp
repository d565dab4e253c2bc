#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "jumpset/grid.hpp"

namespace jumpset {

/// Lower weighted median: the smallest minimiser c of sum_i w_i |v_i - c|.
/// Throws EmptyInput, InvalidArgument (length mismatch, non-positive weight)
/// or NonFiniteValues.
double weighted_median(std::span<const double> values, std::span<const double> weights);

/// Lower median under unit weights; reorders `scratch` in place.
double lower_median_inplace(std::span<double> scratch);

/// Minimiser and minimum of the L1 objective over a weighted sample.
struct L1Fit {
    double median = 0.0;
    double deviation_sum = 0.0;  // sum_i w_i |v_i - median|
    double total_weight = 0.0;

    double osc() const { return deviation_sum / total_weight; }
};

L1Fit l1_fit(std::span<const double> values, std::span<const double> weights);
L1Fit l1_fit(std::span<const double> values);

/// osc = inf_c mean |v - c|, attained at the weighted median.
double osc(std::span<const double> values, std::span<const double> weights);
double osc(std::span<const double> values);

/// Subset of lattice (or grid) nodes with per-node weights.
struct Region {
    std::vector<std::size_t> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
};

/// All nodes of the lattice with unit weight.
Region full_region(const UnitBallLattice& lattice);

/// Lattice nodes y with |y - center| <= radius.
Region ball_region(const UnitBallLattice& lattice, const Ball& ball);

/// Balls capturing fewer nodes than this are too noisy for membership tests.
inline constexpr std::size_t kMinRegionNodes = 8;

/// Undefined (NaN) nodes are dropped. Throws EmptyRegion if nothing is left
/// and NonFiniteValues if the region holds +-inf.
L1Fit l1_fit(const BlowupSample& v, const Region& region);
double osc(const BlowupSample& v, const Region& region);

/// Oscillation of the raw grid over the cells whose centres lie in `ball`.
double osc(const GridFunction& u, const Ball& ball);

/// Oscillation of u^{x,r} over B_1 and over each ball of a family, for a
/// decreasing list of radii. Rows whose radius cannot be sampled at x are
/// marked unavailable; columns for balls with fewer than kMinRegionNodes
/// nodes are marked excluded. Unavailable or excluded entries hold NaN.
struct OscTable {
    Vec x{};
    int dim = 0;
    std::vector<double> radii;
    std::vector<Ball> balls;
    std::vector<bool> available;       // per radius
    std::vector<bool> excluded;        // per ball
    std::vector<double> unit_ball;     // per radius
    std::vector<double> values;        // radii.size() x balls.size(), row-major

    double at(std::size_t radius_index, std::size_t ball_index) const {
        return values[radius_index * balls.size() + ball_index];
    }
};

OscTable osc_table(const GridFunction& u, const Vec& x, std::span<const double> radii, std::span<const Ball> balls,
                   const LatticePtr& lattice, double min_radius_cells = kDefaultMinRadiusCells);

}  // namespace jumpset
