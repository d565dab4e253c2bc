#include "jumpset/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "jumpset/oscillation.hpp"
#include "jumpset/parallel.hpp"

namespace jumpset {
namespace {

void require_inside_unit_ball(const Ball& ball) {
    if (!(ball.radius > 0.0)) throw Error(Errc::InvalidArgument, "ball radius must be positive");
    if (!(norm(ball.center) + ball.radius < 1.0)) throw Error(Errc::InvalidArgument, "ball must lie strictly inside B_1");
}

void require_tau(double tau) {
    if (!(tau > 0.0 && tau < 1.0)) throw Error(Errc::InvalidArgument, "tau must lie in (0, 1)");
}

Region checked_region(const UnitBallLattice& lattice, const Ball& ball) {
    Region region = ball_region(lattice, ball);
    if (region.size() < kMinRegionNodes) {
        throw Error(Errc::InvalidArgument, "ball captures fewer than 8 lattice nodes");
    }
    return region;
}

constexpr double kParallelEps = 1e-12;

}  // namespace

std::vector<Ball> rational_ball_family(int depth, int dim) {
    if (depth < 1 || depth > 20) throw Error(Errc::InvalidArgument, "depth must lie in [1, 20]");
    if (dim < 1 || dim > kMaxDim) throw Error(Errc::DimensionUnsupported, "dim must be 1, 2 or 3");
    const long long denom = 1LL << depth;
    const double scale = 1.0 / static_cast<double>(denom);
    std::vector<Ball> out;
    for (int j = 1; j <= depth; ++j) {
        const long long q = denom >> j;
        const long long reach = denom - q;  // |k| < reach  <=>  |c| + q < 1
        const long long reach2 = reach * reach;
        const long long lo0 = -denom;
        const long long hi1 = dim >= 2 ? denom : 0;
        const long long hi2 = dim >= 3 ? denom : 0;
        for (long long k0 = lo0; k0 <= denom; ++k0) {
            for (long long k1 = -hi1; k1 <= hi1; ++k1) {
                for (long long k2 = -hi2; k2 <= hi2; ++k2) {
                    if (k0 * k0 + k1 * k1 + k2 * k2 >= reach2) continue;
                    Ball b;
                    b.center = {k0 * scale, k1 * scale, k2 * scale};
                    b.radius = static_cast<double>(q) * scale;
                    out.push_back(b);
                }
            }
        }
    }
    return out;
}

ESetParams make_eset_params(double delta, double tau, const Ball& ball, double r0, double spacing, double sigma,
                            double min_radius_cells) {
    if (!(delta > 0.0)) throw Error(Errc::InvalidArgument, "delta must be positive");
    require_tau(tau);
    require_inside_unit_ball(ball);
    if (!(sigma > 0.0 && sigma < 1.0)) throw Error(Errc::InvalidArgument, "sigma must lie in (0, 1)");
    const double r_min = min_radius_cells * spacing;
    if (!(r0 >= r_min * (1.0 - 1e-12))) throw Error(Errc::InvalidArgument, "r0 is below the grid guard");
    ESetParams p;
    p.delta = delta;
    p.tau = tau;
    p.ball = ball;
    p.r0 = r0;
    for (int k = 0;; ++k) {
        const double r = r0 * std::pow(sigma, k);
        if (r < r_min * (1.0 - 1e-12)) break;
        p.radii.push_back(r);
    }
    return p;
}

bool e_set_membership(const GridFunction& u, const Vec& x, const ESetParams& params, const LatticePtr& lattice) {
    if (params.radii.empty()) throw Error(Errc::InvalidArgument, "no radius samples");
    const Region whole = full_region(*lattice);
    const Region quiet = checked_region(*lattice, params.ball);
    for (double r : params.radii) {
        if (!blowup_fits(u, x, r)) throw Error(Errc::Insufficient, "a sampled radius leaves the domain");
    }
    // Finest radii first: they are the cheapest way to reject a point.
    for (auto it = params.radii.rbegin(); it != params.radii.rend(); ++it) {
        const BlowupSample s = blowup_sample(u, x, *it, lattice, 0.0);
        if (osc(s, whole) < params.delta) return false;
        if (osc(s, quiet) > params.tau * params.delta) return false;
    }
    return true;
}

ConeSpec cone_from_params(const Ball& ball, double tau, double r0, int dim) {
    require_tau(tau);
    require_inside_unit_ball(ball);
    if (dim < 1 || dim > kMaxDim) throw Error(Errc::DimensionUnsupported, "dim must be 1, 2 or 3");
    if (!(r0 > 0.0)) throw Error(Errc::InvalidArgument, "r0 must be positive");
    ConeSpec c;
    c.dim = dim;
    c.z0 = ball.center;
    c.z0_norm = norm(ball.center);
    c.rho = ball.radius;
    c.rho_prime = 0.5 * std::pow(tau, 1.0 / dim) * ball.radius;
    c.eps = c.rho - c.rho_prime;
    c.range = r0;
    if (c.z0_norm == 0.0) throw Error(Errc::DegenerateCone, "ball is centred at the origin");
    if (!(c.eps < c.z0_norm)) throw Error(Errc::DegenerateCone, "eps >= |z0|: the cone is not proper");
    c.axis = (1.0 / c.z0_norm) * c.z0;
    c.sin_half_aperture = c.eps / c.z0_norm;
    c.lipschitz = std::sqrt(c.z0_norm * c.z0_norm - c.eps * c.eps) / c.eps;
    return c;
}

std::optional<double> cone_witness(const Vec& d, const ConeSpec& cone) {
    const double cc = dot(d, d);
    if (cc == 0.0) return std::nullopt;
    const double bb = dot(d, cone.z0);
    if (!(bb > 0.0)) return std::nullopt;
    const double aa = cone.z0_norm * cone.z0_norm - cone.eps * cone.eps;
    const double disc = bb * bb - aa * cc;
    if (disc < 0.0) return std::nullopt;
    const double root = std::sqrt(disc);
    const double r_lo = cc / (bb + root);
    const double r_hi = (bb + root) / aa;
    if (r_lo > cone.range) return std::nullopt;
    return 0.5 * (r_lo + std::min(r_hi, cone.range));
}

bool in_cone(const Vec& d, const ConeSpec& cone) { return cone_witness(d, cone).has_value(); }

bool in_cone_symmetric(const Vec& d, const ConeSpec& cone) { return in_cone(d, cone) || in_cone(-d, cone); }

namespace {

void collect_e_set(ESet& out, const GridFunction& u, const std::vector<signed char>& verdict) {
    for (std::size_t i = 0; i < verdict.size(); ++i) {
        if (verdict[i] == 1) {
            out.points.push_back(u.cell_center(i));
            out.indices.push_back(i);
        } else if (verdict[i] < 0) {
            ++out.insufficient;
        }
    }
}

signed char membership_code(const GridFunction& u, std::size_t i, const ESetParams& params, const LatticePtr& lattice) {
    try {
        return e_set_membership(u, u.cell_center(i), params, lattice) ? 1 : 0;
    } catch (const Error& e) {
        if (e.code() == Errc::Insufficient) return -1;
        throw;
    }
}

ESet empty_e_set(const GridFunction& u, const ESetParams& params) {
    ESet out;
    out.params = params;
    out.dim = u.dim();
    out.spacing = u.spacing();
    return out;
}

}  // namespace

ESet extract_e_set(const GridFunction& u, const ESetParams& params, const LatticePtr& lattice, int workers) {
    checked_region(*lattice, params.ball);
    std::vector<signed char> verdict(u.size());
    parallel_for(u.size(), workers, [&](std::size_t i) { verdict[i] = membership_code(u, i, params, lattice); });
    ESet out = empty_e_set(u, params);
    collect_e_set(out, u, verdict);
    return out;
}

ESet extract_e_set_serial(const GridFunction& u, const ESetParams& params, const LatticePtr& lattice) {
    checked_region(*lattice, params.ball);
    std::vector<signed char> verdict(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) verdict[i] = membership_code(u, i, params, lattice);
    ESet out = empty_e_set(u, params);
    collect_e_set(out, u, verdict);
    return out;
}

namespace {

void violations_from(std::size_t i, std::span<const Vec> points, const ConeSpec& cone, double guard,
                     std::vector<ConePair>& out) {
    const double guard2 = guard * guard;
    for (std::size_t j = i + 1; j < points.size(); ++j) {
        const Vec d = points[j] - points[i];
        if (dot(d, d) <= guard2) continue;
        if (in_cone_symmetric(d, cone)) out.push_back({i, j});
    }
}

}  // namespace

std::vector<ConePair> verify_cone_property(std::span<const Vec> points, const ConeSpec& cone, double guard,
                                           int workers) {
    std::vector<std::vector<ConePair>> per_row(points.size());
    parallel_for(points.size(), workers, [&](std::size_t i) { violations_from(i, points, cone, guard, per_row[i]); });
    std::vector<ConePair> out;
    for (auto& row : per_row) out.insert(out.end(), row.begin(), row.end());
    return out;
}

std::vector<ConePair> verify_cone_property_serial(std::span<const Vec> points, const ConeSpec& cone, double guard) {
    std::vector<ConePair> out;
    for (std::size_t i = 0; i < points.size(); ++i) violations_from(i, points, cone, guard, out);
    return out;
}

double graph_slope(const Vec& d, const ConeSpec& cone) {
    const double along = dot(d, cone.axis);
    const double across = norm(d - along * cone.axis);
    if (across <= kParallelEps * norm(d)) return std::numeric_limits<double>::infinity();
    return std::abs(along) / across;
}

bool CoverReport::all_pass() const {
    return std::all_of(cells.begin(), cells.end(), [](const CoverCell& c) { return c.pass; });
}

double CoverReport::worst_slope() const {
    double worst = 0.0;
    for (const CoverCell& c : cells) worst = std::max(worst, c.worst_slope);
    return worst;
}

CoverReport cover_with_graphs(std::span<const Vec> points, const ConeSpec& cone) {
    CoverReport report;
    report.cone = cone;
    report.cell_side = cone.range * (cone.z0_norm - cone.eps) / std::sqrt(static_cast<double>(cone.dim));
    std::map<std::array<long long, 3>, std::vector<std::size_t>> cells;
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::array<long long, 3> id{};
        for (int k = 0; k < cone.dim; ++k) {
            id[k] = static_cast<long long>(std::floor(points[i][k] / report.cell_side));
        }
        cells[id].push_back(i);
    }
    for (auto& [id, members] : cells) {
        CoverCell cell;
        cell.id = id;
        cell.members = std::move(members);
        for (std::size_t a = 0; a < cell.members.size(); ++a) {
            for (std::size_t b = a + 1; b < cell.members.size(); ++b) {
                const Vec d = points[cell.members[b]] - points[cell.members[a]];
                if (dot(d, d) == 0.0) continue;
                const double slope = graph_slope(d, cone);
                if (std::isinf(slope)) cell.infinite_slope = true;
                cell.worst_slope = std::max(cell.worst_slope, slope);
            }
        }
        cell.pass = !cell.infinite_slope && cell.worst_slope <= cone.lipschitz + 1e-12;
        report.cells.push_back(std::move(cell));
    }
    return report;
}

SweepResult sweep_e_sets(const GridFunction& u, std::span<const double> deltas, double tau,
                         std::span<const Ball> family, double r0, const LatticePtr& lattice, int workers,
                         double sigma) {
    if (deltas.empty()) throw Error(Errc::InvalidArgument, "no delta values");
    require_tau(tau);
    const double h = u.spacing();
    const double delta_min = *std::min_element(deltas.begin(), deltas.end());

    std::vector<Region> regions;
    std::vector<std::size_t> usable;
    for (std::size_t b = 0; b < family.size(); ++b) {
        Region region = ball_region(*lattice, family[b]);
        if (region.size() >= kMinRegionNodes) {
            usable.push_back(b);
            regions.push_back(std::move(region));
        }
    }
    SweepResult result;
    result.r0 = r0;
    result.radii = make_eset_params(delta_min, tau, family.empty() ? Ball{{}, 0.5} : family.front(), r0, h, sigma).radii;

    const Region whole = full_region(*lattice);
    struct PointStats {
        signed char state = 0;  // -1 insufficient, 0 rejected, 1 alive
        double min_unit = 0.0;
        std::vector<double> max_ball;
    };
    std::vector<PointStats> stats(u.size());
    parallel_for(u.size(), workers, [&](std::size_t i) {
        PointStats& st = stats[i];
        const Vec x = u.cell_center(i);
        if (!blowup_fits(u, x, result.radii.front())) {
            st.state = -1;
            return;
        }
        st.min_unit = std::numeric_limits<double>::infinity();
        std::vector<double> max_ball(regions.size(), 0.0);
        for (auto it = result.radii.rbegin(); it != result.radii.rend(); ++it) {
            const BlowupSample s = blowup_sample(u, x, *it, lattice, 0.0);
            st.min_unit = std::min(st.min_unit, osc(s, whole));
            if (st.min_unit < delta_min) return;
            for (std::size_t b = 0; b < regions.size(); ++b) max_ball[b] = std::max(max_ball[b], osc(s, regions[b]));
        }
        st.state = 1;
        st.max_ball = std::move(max_ball);
    });

    for (double delta : deltas) {
        for (std::size_t ub = 0; ub < usable.size(); ++ub) {
            ESet set = empty_e_set(u, make_eset_params(delta, tau, family[usable[ub]], r0, h, sigma));
            for (std::size_t i = 0; i < stats.size(); ++i) {
                const PointStats& st = stats[i];
                if (st.state < 0) {
                    ++set.insufficient;
                } else if (st.state == 1 && st.min_unit >= delta && st.max_ball[ub] <= tau * delta) {
                    set.points.push_back(u.cell_center(i));
                    set.indices.push_back(i);
                }
            }
            result.sets.push_back(std::move(set));
        }
    }
    return result;
}

}  // namespace jumpset
