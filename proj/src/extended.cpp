#include "jumpset/extended.hpp"

#include <cmath>
#include <limits>

namespace jumpset {

double phi(double v) noexcept {
    if (std::isinf(v)) return v > 0 ? std::numbers::pi / 2 : -std::numbers::pi / 2;
    return std::atan(v);
}

double phi_inverse(double w) noexcept {
    if (w >= std::numbers::pi / 2) return std::numeric_limits<double>::infinity();
    if (w <= -std::numbers::pi / 2) return -std::numeric_limits<double>::infinity();
    return std::tan(w);
}

GridFunction phi_apply(const GridFunction& u) {
    std::vector<double> values(u.values().begin(), u.values().end());
    for (double& v : values) v = phi(v);
    return GridFunction(u.shape(), u.spacing(), u.origin(), std::move(values));
}

double measure_distance(const BlowupSample& f, const BlowupSample& g, double eps) {
    if (!(eps > 0.0)) throw Error(Errc::InvalidArgument, "eps must be positive");
    if (!f.lattice || !g.lattice || !f.lattice->same_as(*g.lattice) || f.values.size() != g.values.size()) {
        throw Error(Errc::LatticeMismatch, "samples use different lattices");
    }
    std::size_t count = 0;
    std::size_t far = 0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double a = f.values[i];
        const double b = g.values[i];
        if (std::isnan(a) || std::isnan(b)) continue;
        ++count;
        if (std::abs(a - b) > eps) ++far;
    }
    if (count == 0) throw Error(Errc::AllUndefined, "no node is defined in both samples");
    return static_cast<double>(far) / static_cast<double>(count);
}

ClassifyConfig extended_config(ClassifyConfig cfg, const GridFunction& transformed) {
    if (cfg.value_range > 0.0) return cfg;
    const auto [lo, hi] = transformed.finite_range();
    cfg.value_range = hi > lo ? hi - lo : kPhiRange;
    return cfg;
}

PointClass classify_extended(const GridFunction& u, const Vec& x, const ClassifyConfig& cfg) {
    const GridFunction w = phi_apply(u);
    return classify_point(w, x, extended_config(cfg, w));
}

std::vector<PointReport> classify_grid_extended(const GridFunction& u, const ClassifyConfig& cfg, int workers) {
    const GridFunction w = phi_apply(u);
    return classify_grid(w, extended_config(cfg, w), workers);
}

}  // namespace jumpset
