#pragma once

#include <numbers>
#include <vector>

#include "jumpset/classify.hpp"
#include "jumpset/grid.hpp"

namespace jumpset {

/// Span of the full arctan image.
inline constexpr double kPhiRange = std::numbers::pi;

/// arctan extended by its limits: +-inf -> +-pi/2. NaN passes through.
double phi(double v) noexcept;

/// tan on (-pi/2, pi/2); +-pi/2 map back to +-inf.
double phi_inverse(double w) noexcept;

/// Pointwise phi on a grid function; shape, spacing and origin are kept.
GridFunction phi_apply(const GridFunction& u);

/// Fraction of nodes defined in both samples where |f - g| > eps. Expects
/// finite (already transformed) values. Throws LatticeMismatch,
/// AllUndefined, or InvalidArgument for eps <= 0.
double measure_distance(const BlowupSample& f, const BlowupSample& g, double eps);

/// `cfg` with value_range set to the span of the transformed values
/// (at most pi) unless the caller fixed one.
ClassifyConfig extended_config(ClassifyConfig cfg, const GridFunction& transformed);

/// classify_point on phi_apply(u) with tolerances scaled to the span of
/// the image.
PointClass classify_extended(const GridFunction& u, const Vec& x, const ClassifyConfig& cfg = {});

/// classify_grid counterpart of classify_extended.
std::vector<PointReport> classify_grid_extended(const GridFunction& u, const ClassifyConfig& cfg, int workers);

}  // namespace jumpset
