#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "jumpset/types.hpp"

namespace jumpset {

/// Sampled function on a uniform, cell-centred lattice in R^n (n <= 3).
///
/// Values are stored row-major (axis 0 slowest). NaN marks an undefined
/// sample; +-inf are allowed and only become usable after the arctan
/// transform in extended.hpp. Immutable after construction.
class GridFunction {
public:
    GridFunction(std::vector<std::size_t> shape, double spacing, Vec origin, std::vector<double> values);

    int dim() const noexcept { return static_cast<int>(shape_.size()); }
    const std::vector<std::size_t>& shape() const noexcept { return shape_; }
    double spacing() const noexcept { return spacing_; }
    const Vec& origin() const noexcept { return origin_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    /// Centre of the cell with the given row-major index.
    Vec cell_center(std::size_t flat) const;

    /// Domain box: [origin - h/2, origin + h(N-1) + h/2] per axis.
    Vec lower() const;
    Vec upper() const;

    /// Largest r such that the closed ball B_r(x) lies inside the domain box
    /// (negative when x is outside).
    double distance_to_boundary(const Vec& x) const;

    /// Multilinear interpolation at a physical point. Coordinates past the
    /// outermost cell centres are clamped. If any contributing corner is
    /// non-finite the nearest corner value is returned instead.
    double interpolate(const Vec& p) const;

    /// (min, max) over finite values; (0, 0) when there are none.
    std::pair<double, double> finite_range() const;

private:
    std::vector<std::size_t> shape_;
    std::vector<std::size_t> strides_;
    double spacing_;
    Vec origin_;
    std::vector<double> values_;
};

/// Lattice nodes y in [-1,1]^n with |y| <= 1, m nodes per axis including
/// both endpoints; odd m puts a node at the origin. Uniform unit weights.
class UnitBallLattice {
public:
    UnitBallLattice(int dim, int resolution = 33);

    int dim() const noexcept { return dim_; }
    int resolution() const noexcept { return resolution_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    const std::vector<Vec>& nodes() const noexcept { return nodes_; }
    const Vec& node(std::size_t i) const { return nodes_[i]; }
    /// Index of the node -y for node i.
    std::size_t mirror(std::size_t i) const { return mirror_[i]; }

    bool same_as(const UnitBallLattice& other) const noexcept {
        return dim_ == other.dim_ && resolution_ == other.resolution_;
    }

private:
    int dim_;
    int resolution_;
    std::vector<Vec> nodes_;
    std::vector<std::size_t> mirror_;
};

using LatticePtr = std::shared_ptr<const UnitBallLattice>;

inline LatticePtr make_lattice(int dim, int resolution = 33) {
    return std::make_shared<const UnitBallLattice>(dim, resolution);
}

/// u^{x,r} evaluated on the nodes of a unit-ball lattice.
struct BlowupSample {
    Vec x{};
    double r = 0.0;
    LatticePtr lattice;
    std::vector<double> values;
};

/// Default r_min guard in cells.
inline constexpr double kDefaultMinRadiusCells = 2.0;

/// True when x + r B_1 fits in the domain box.
bool blowup_fits(const GridFunction& u, const Vec& x, double r);

/// Samples u(x + r y) at every lattice node.
/// Throws OutOfDomain if x + r B_1 leaves the domain and RadiusTooSmall if
/// r < min_radius_cells * h.
BlowupSample blowup_sample(const GridFunction& u, const Vec& x, double r, LatticePtr lattice,
                           double min_radius_cells = kDefaultMinRadiusCells);

/// Mean |f - g| over nodes where both are defined. Matching infinities
/// contribute 0, a mismatched infinity makes the result +inf.
/// Throws LatticeMismatch or AllUndefined.
double l1_distance(const BlowupSample& f, const BlowupSample& g);

}  // namespace jumpset
