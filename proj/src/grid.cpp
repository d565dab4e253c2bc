#include "jumpset/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace jumpset {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::OutOfDomain: return "OutOfDomain";
        case Errc::RadiusTooSmall: return "RadiusTooSmall";
        case Errc::LatticeMismatch: return "LatticeMismatch";
        case Errc::AllUndefined: return "AllUndefined";
        case Errc::FormatError: return "FormatError";
        case Errc::DimensionUnsupported: return "DimensionUnsupported";
        case Errc::EmptyInput: return "EmptyInput";
        case Errc::EmptyRegion: return "EmptyRegion";
        case Errc::NonFiniteValues: return "NonFiniteValues";
        case Errc::Insufficient: return "Insufficient";
        case Errc::DegenerateHalf: return "DegenerateHalf";
        case Errc::NoQuietBall: return "NoQuietBall";
        case Errc::DegenerateCone: return "DegenerateCone";
        case Errc::InvalidSpec: return "InvalidSpec";
    }
    return "Unknown";
}

GridFunction::GridFunction(std::vector<std::size_t> shape, double spacing, Vec origin, std::vector<double> values)
    : shape_(std::move(shape)), spacing_(spacing), origin_(origin), values_(std::move(values)) {
    if (shape_.empty() || shape_.size() > static_cast<std::size_t>(kMaxDim)) {
        throw Error(Errc::DimensionUnsupported, "grid dimension must be 1..3, got " + std::to_string(shape_.size()));
    }
    if (!(spacing_ > 0.0) || !std::isfinite(spacing_)) {
        throw Error(Errc::InvalidArgument, "spacing must be positive and finite");
    }
    std::size_t count = 1;
    for (std::size_t extent : shape_) {
        if (extent < 2) throw Error(Errc::InvalidArgument, "every extent must be >= 2");
        count *= extent;
    }
    if (count != values_.size()) {
        throw Error(Errc::InvalidArgument, "values length " + std::to_string(values_.size()) +
                                               " != product of shape " + std::to_string(count));
    }
    for (std::size_t k = shape_.size(); k < static_cast<std::size_t>(kMaxDim); ++k) origin_[k] = 0.0;
    strides_.assign(shape_.size(), 1);
    for (std::size_t k = shape_.size() - 1; k > 0; --k) strides_[k - 1] = strides_[k] * shape_[k];
}

Vec GridFunction::cell_center(std::size_t flat) const {
    Vec p{};
    for (std::size_t k = 0; k < shape_.size(); ++k) {
        const std::size_t i = (flat / strides_[k]) % shape_[k];
        p[k] = origin_[k] + spacing_ * static_cast<double>(i);
    }
    return p;
}

Vec GridFunction::lower() const {
    Vec p{};
    for (std::size_t k = 0; k < shape_.size(); ++k) p[k] = origin_[k] - 0.5 * spacing_;
    return p;
}

Vec GridFunction::upper() const {
    Vec p{};
    for (std::size_t k = 0; k < shape_.size(); ++k) {
        p[k] = origin_[k] + spacing_ * (static_cast<double>(shape_[k]) - 0.5);
    }
    return p;
}

double GridFunction::distance_to_boundary(const Vec& x) const {
    const Vec lo = lower();
    const Vec hi = upper();
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < shape_.size(); ++k) d = std::min({d, x[k] - lo[k], hi[k] - x[k]});
    return d;
}

double GridFunction::interpolate(const Vec& p) const {
    const int n = dim();
    std::array<std::size_t, kMaxDim> base{};
    std::array<double, kMaxDim> frac{};
    for (int k = 0; k < n; ++k) {
        const double top = static_cast<double>(shape_[k] - 1);
        const double t = std::clamp((p[k] - origin_[k]) / spacing_, 0.0, top);
        double i0 = std::floor(t);
        if (i0 >= top) i0 = top - 1.0;
        base[k] = static_cast<std::size_t>(i0);
        frac[k] = t - i0;
    }

    const int corners = 1 << n;
    std::array<double, 8> vals{};
    std::array<double, 8> weights{};
    bool all_finite = true;
    bool all_equal = true;
    for (int c = 0; c < corners; ++c) {
        std::size_t flat = 0;
        double w = 1.0;
        for (int k = 0; k < n; ++k) {
            const bool hi = (c >> k) & 1;
            flat += (base[k] + (hi ? 1 : 0)) * strides_[k];
            w *= hi ? frac[k] : 1.0 - frac[k];
        }
        vals[c] = values_[flat];
        weights[c] = w;
        all_finite = all_finite && std::isfinite(vals[c]);
        // NaN != NaN, so an undefined corner never counts as equal.
        all_equal = all_equal && vals[c] == vals[0];
    }
    if (all_equal) return vals[0];
    if (!all_finite) {
        int nearest = 0;
        for (int k = 0; k < n; ++k) {
            if (frac[k] > 0.5) nearest |= 1 << k;
        }
        return vals[nearest];
    }
    double acc = 0.0;
    for (int c = 0; c < corners; ++c) {
        if (weights[c] != 0.0) acc += weights[c] * vals[c];
    }
    return acc;
}

std::pair<double, double> GridFunction::finite_range() const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : values_) {
        if (!std::isfinite(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo > hi) return {0.0, 0.0};
    return {lo, hi};
}

UnitBallLattice::UnitBallLattice(int dim, int resolution) : dim_(dim), resolution_(resolution) {
    if (dim < 1 || dim > kMaxDim) throw Error(Errc::DimensionUnsupported, "lattice dimension must be 1..3");
    if (resolution < 3) throw Error(Errc::InvalidArgument, "lattice resolution must be >= 3");

    // (2i - c) / c is exactly antisymmetric under i -> m-1-i.
    const auto coord = [&](int i) {
        return static_cast<double>(2 * i - (resolution - 1)) / static_cast<double>(resolution - 1);
    };
    const int m = resolution;
    const int span1 = dim > 1 ? m : 1;
    const int span2 = dim > 2 ? m : 1;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < span1; ++j) {
            for (int k = 0; k < span2; ++k) {
                Vec y{coord(i), dim > 1 ? coord(j) : 0.0, dim > 2 ? coord(k) : 0.0};
                // Exact integer test of |y| <= 1 avoids asymmetric rounding.
                const long c = m - 1;
                const long a = 2L * i - c;
                const long b = dim > 1 ? 2L * j - c : 0;
                const long d = dim > 2 ? 2L * k - c : 0;
                if (a * a + b * b + d * d <= c * c) {
                    nodes_.push_back(y);
                }
            }
        }
    }
    // Nodes are enumerated lexicographically, so the mirror of node t is node size-1-t.
    mirror_.resize(nodes_.size());
    for (std::size_t t = 0; t < nodes_.size(); ++t) mirror_[t] = nodes_.size() - 1 - t;
}

bool blowup_fits(const GridFunction& u, const Vec& x, double r) {
    const double slack = 1e-12 * (1.0 + std::abs(r));
    return u.distance_to_boundary(x) + slack >= r;
}

BlowupSample blowup_sample(const GridFunction& u, const Vec& x, double r, LatticePtr lattice,
                           double min_radius_cells) {
    if (!lattice || lattice->dim() != u.dim()) {
        throw Error(Errc::LatticeMismatch, "lattice dimension does not match grid");
    }
    const double r_min = min_radius_cells * u.spacing();
    if (!(r >= r_min * (1.0 - 1e-12))) {
        throw Error(Errc::RadiusTooSmall, "radius " + std::to_string(r) + " below guard " + std::to_string(r_min));
    }
    if (!blowup_fits(u, x, r)) {
        throw Error(Errc::OutOfDomain, "ball of radius " + std::to_string(r) + " leaves the domain");
    }
    BlowupSample s;
    s.x = x;
    s.r = r;
    s.values.resize(lattice->size());
    for (std::size_t i = 0; i < lattice->size(); ++i) s.values[i] = u.interpolate(x + r * lattice->node(i));
    s.lattice = std::move(lattice);
    return s;
}

double l1_distance(const BlowupSample& f, const BlowupSample& g) {
    if (!f.lattice || !g.lattice || !f.lattice->same_as(*g.lattice) || f.values.size() != g.values.size()) {
        throw Error(Errc::LatticeMismatch, "samples use different lattices");
    }
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double a = f.values[i];
        const double b = g.values[i];
        if (std::isnan(a) || std::isnan(b)) continue;
        ++count;
        if (std::isinf(a) || std::isinf(b)) {
            if (a != b) acc = std::numeric_limits<double>::infinity();
            continue;
        }
        acc += std::abs(a - b);
    }
    if (count == 0) throw Error(Errc::AllUndefined, "no node where both samples are defined");
    return acc / static_cast<double>(count);
}

}  // namespace jumpset
