#include "jumpset/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace jumpset {
namespace {

void require_finite(std::span<const double> values) {
    for (double v : values) {
        if (!std::isfinite(v)) throw Error(Errc::NonFiniteValues, "oscillation needs finite values");
    }
}

}  // namespace

double lower_median_inplace(std::span<double> scratch) {
    if (scratch.empty()) throw Error(Errc::EmptyInput, "median of an empty sample");
    const std::size_t mid = (scratch.size() - 1) / 2;
    std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(mid), scratch.end());
    return scratch[mid];
}

double weighted_median(std::span<const double> values, std::span<const double> weights) {
    if (values.empty()) throw Error(Errc::EmptyInput, "weighted median of an empty sample");
    if (values.size() != weights.size()) throw Error(Errc::InvalidArgument, "values and weights differ in length");
    require_finite(values);

    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[a] < values[b] || (values[a] == values[b] && a < b);
    });
    double total = 0.0;
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) throw Error(Errc::InvalidArgument, "weights must be positive");
        total += w;
    }
    // First sorted value whose cumulative weight reaches half the total.
    double cumulative = 0.0;
    for (std::size_t i : order) {
        cumulative += weights[i];
        if (2.0 * cumulative >= total) return values[i];
    }
    return values[order.back()];
}

L1Fit l1_fit(std::span<const double> values, std::span<const double> weights) {
    L1Fit fit;
    fit.median = weighted_median(values, weights);
    for (std::size_t i = 0; i < values.size(); ++i) {
        fit.deviation_sum += weights[i] * std::abs(values[i] - fit.median);
        fit.total_weight += weights[i];
    }
    return fit;
}

L1Fit l1_fit(std::span<const double> values) {
    if (values.empty()) throw Error(Errc::EmptyInput, "oscillation of an empty sample");
    require_finite(values);
    std::vector<double> scratch(values.begin(), values.end());
    L1Fit fit;
    fit.median = lower_median_inplace(scratch);
    for (double v : values) fit.deviation_sum += std::abs(v - fit.median);
    fit.total_weight = static_cast<double>(values.size());
    return fit;
}

double osc(std::span<const double> values, std::span<const double> weights) { return l1_fit(values, weights).osc(); }

double osc(std::span<const double> values) { return l1_fit(values).osc(); }

Region full_region(const UnitBallLattice& lattice) {
    Region r;
    r.nodes.resize(lattice.size());
    std::iota(r.nodes.begin(), r.nodes.end(), std::size_t{0});
    r.weights.assign(lattice.size(), 1.0);
    return r;
}

Region ball_region(const UnitBallLattice& lattice, const Ball& ball) {
    Region r;
    const double r2 = ball.radius * ball.radius * (1.0 + 1e-12);
    for (std::size_t i = 0; i < lattice.size(); ++i) {
        const Vec d = lattice.node(i) - ball.center;
        if (dot(d, d) <= r2) r.nodes.push_back(i);
    }
    r.weights.assign(r.nodes.size(), 1.0);
    return r;
}

L1Fit l1_fit(const BlowupSample& v, const Region& region) {
    std::vector<double> vals;
    std::vector<double> weights;
    vals.reserve(region.size());
    weights.reserve(region.size());
    bool uniform = true;
    for (std::size_t k = 0; k < region.size(); ++k) {
        const double value = v.values.at(region.nodes[k]);
        if (std::isnan(value)) continue;
        vals.push_back(value);
        const double w = region.weights.empty() ? 1.0 : region.weights[k];
        weights.push_back(w);
        uniform = uniform && w == 1.0;
    }
    if (vals.empty()) throw Error(Errc::EmptyRegion, "region has no defined samples");
    return uniform ? l1_fit(vals) : l1_fit(vals, weights);
}

double osc(const BlowupSample& v, const Region& region) { return l1_fit(v, region).osc(); }

double osc(const GridFunction& u, const Ball& ball) {
    std::vector<double> vals;
    const double r2 = ball.radius * ball.radius;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const Vec d = u.cell_center(i) - ball.center;
        if (dot(d, d) > r2) continue;
        const double value = u.values()[i];
        if (!std::isnan(value)) vals.push_back(value);
    }
    if (vals.empty()) throw Error(Errc::EmptyRegion, "ball contains no defined grid samples");
    return osc(vals);
}

OscTable osc_table(const GridFunction& u, const Vec& x, std::span<const double> radii, std::span<const Ball> balls,
                   const LatticePtr& lattice, double min_radius_cells) {
    for (std::size_t k = 1; k < radii.size(); ++k) {
        if (!(radii[k] < radii[k - 1])) throw Error(Errc::InvalidArgument, "radii must be strictly decreasing");
    }
    OscTable table;
    table.x = x;
    table.dim = u.dim();
    table.radii.assign(radii.begin(), radii.end());
    table.balls.assign(balls.begin(), balls.end());
    table.available.assign(radii.size(), false);
    table.unit_ball.assign(radii.size(), std::numeric_limits<double>::quiet_NaN());
    table.values.assign(radii.size() * balls.size(), std::numeric_limits<double>::quiet_NaN());

    std::vector<Region> regions;
    regions.reserve(balls.size());
    for (const Ball& b : balls) {
        regions.push_back(ball_region(*lattice, b));
        table.excluded.push_back(regions.back().size() < kMinRegionNodes);
    }
    const Region whole = full_region(*lattice);

    for (std::size_t k = 0; k < radii.size(); ++k) {
        BlowupSample sample;
        try {
            sample = blowup_sample(u, x, radii[k], lattice, min_radius_cells);
            table.unit_ball[k] = osc(sample, whole);
        } catch (const Error&) {
            continue;
        }
        table.available[k] = true;
        for (std::size_t b = 0; b < balls.size(); ++b) {
            if (table.excluded[b]) continue;
            try {
                table.values[k * balls.size() + b] = osc(sample, regions[b]);
            } catch (const Error&) {
            }
        }
    }
    return table;
}

}  // namespace jumpset
