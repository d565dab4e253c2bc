#include "jumpset/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "jumpset/oscillation.hpp"
#include "jumpset/parallel.hpp"

namespace jumpset {
namespace {

constexpr double kPlaneEps = 1e-12;
constexpr double kTieEps = 1e-12;

double degrees_to_radians(double deg) { return deg * std::numbers::pi / 180.0; }

/// Scratch buffers reused across directions of one fit.
struct HalfSplit {
    std::vector<double> pos;
    std::vector<double> neg;
};

struct DirectionScore {
    double a = 0.0;
    double b = 0.0;
    double residual = std::numeric_limits<double>::infinity();
    std::size_t smaller_half = 0;
};

DirectionScore score_direction(const BlowupSample& v, const Vec& nu, HalfSplit& split) {
    const auto& nodes = v.lattice->nodes();
    split.pos.clear();
    split.neg.clear();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double value = v.values[i];
        if (std::isnan(value)) continue;
        const double s = dot(nu, nodes[i]);
        if (s > kPlaneEps) {
            split.pos.push_back(value);
        } else if (s < -kPlaneEps) {
            split.neg.push_back(value);
        }
    }
    DirectionScore score;
    score.smaller_half = std::min(split.pos.size(), split.neg.size());
    if (split.pos.empty() || split.neg.empty()) return score;
    score.a = lower_median_inplace(split.pos);
    score.b = lower_median_inplace(split.neg);
    score.residual = jump_residual(v, score.a, score.b, nu);
    return score;
}

struct Candidate {
    Vec nu{};
    DirectionScore score;
};

/// Keeps the earlier candidate unless the new one is better by more than
/// rounding noise, so near-ties resolve by search order.
bool improves(const DirectionScore& challenger, const DirectionScore& incumbent) {
    if (challenger.smaller_half < kMinRegionNodes) return false;
    if (incumbent.smaller_half < kMinRegionNodes) return true;
    return challenger.residual < incumbent.residual - kTieEps * (1.0 + incumbent.residual);
}

Vec unit(const Vec& v) {
    const double n = norm(v);
    return (1.0 / n) * v;
}

Candidate fit_1d(const BlowupSample& v) {
    HalfSplit split;
    Candidate best;
    for (double s : {1.0, -1.0}) {
        const Vec nu{s, 0.0, 0.0};
        const DirectionScore score = score_direction(v, nu, split);
        if (improves(score, best.score)) best = {nu, score};
    }
    return best;
}

Vec direction_2d(double angle) { return {std::cos(angle), std::sin(angle), 0.0}; }

/// Residual differences below half a node's weight are below what the
/// lattice can resolve.
double plateau_tolerance(const BlowupSample& v, const DirectionScore& s) {
    std::size_t defined = 0;
    for (double value : v.values) defined += std::isnan(value) ? 0 : 1;
    return 0.5 * std::abs(s.a - s.b) / static_cast<double>(std::max<std::size_t>(defined, 1));
}

/// Coarse scan, then a fine scan around the winner. The residual is often
/// flat over an arc of directions (curved interfaces, lattice quantisation),
/// so the midpoint of the near-optimal arc is returned rather than its first
/// angle.
Candidate fit_2d(const BlowupSample& v, const ClassifyConfig& cfg) {
    HalfSplit split;
    const int count = std::max(4, cfg.directions_2d);
    const double coarse = 2.0 * std::numbers::pi / count;
    std::vector<DirectionScore> scores(static_cast<std::size_t>(count));
    int best_k = -1;
    for (int k = 0; k < count; ++k) {
        scores[k] = score_direction(v, direction_2d(k * coarse), split);
        if (best_k < 0 || improves(scores[k], scores[best_k])) best_k = k;
    }
    if (scores[best_k].smaller_half < kMinRegionNodes) return {direction_2d(best_k * coarse), scores[best_k]};

    const double tol = plateau_tolerance(v, scores[best_k]);
    auto near = [&](const DirectionScore& s) {
        return s.smaller_half >= kMinRegionNodes && s.residual <= scores[best_k].residual + tol;
    };
    // Near-optimal coarse arc around best_k, at most half a turn.
    int lo = 0;
    int hi = 0;
    while (lo < count / 4 && near(scores[(best_k - lo - 1 + count) % count])) ++lo;
    while (hi < count / 4 && near(scores[(best_k + hi + 1) % count])) ++hi;

    const double fine = std::min(coarse, degrees_to_radians(cfg.refine_degrees));
    const double from = (best_k - lo - 1) * coarse;
    const double to = (best_k + hi + 1) * coarse;
    const int steps = static_cast<int>(std::ceil((to - from) / fine));
    std::vector<DirectionScore> fine_scores(static_cast<std::size_t>(steps) + 1);
    int fine_best = -1;
    for (int k = 0; k <= steps; ++k) {
        fine_scores[k] = score_direction(v, direction_2d(from + k * fine), split);
        if (fine_best < 0 || improves(fine_scores[k], fine_scores[fine_best])) fine_best = k;
    }
    const DirectionScore& fine_min = fine_scores[fine_best];
    const double fine_tol = plateau_tolerance(v, fine_min);
    auto fine_near = [&](int k) {
        return fine_scores[k].smaller_half >= kMinRegionNodes && fine_scores[k].residual <= fine_min.residual + fine_tol;
    };
    int first = fine_best;
    int last = fine_best;
    while (first > 0 && fine_near(first - 1)) --first;
    while (last < steps && fine_near(last + 1)) ++last;

    const double mid = from + 0.5 * (first + last) * fine;
    Candidate best{direction_2d(mid), score_direction(v, direction_2d(mid), split)};
    if (best.score.smaller_half < kMinRegionNodes) best = {direction_2d(from + fine_best * fine), fine_min};
    return best;
}

Candidate fit_3d(const BlowupSample& v, const ClassifyConfig& cfg) {
    HalfSplit split;
    Candidate best;
    const int count = std::max(32, cfg.directions_3d);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
        const double z = 1.0 - (2.0 * k + 1.0) / count;
        const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * k;
        const Vec nu{rad * std::cos(phi), rad * std::sin(phi), z};
        const DirectionScore score = score_direction(v, nu, split);
        if (improves(score, best.score)) best = {nu, score};
    }
    // Pattern search on the tangent plane, halving the step until it drops
    // below the refinement resolution.
    double step = std::sqrt(4.0 * std::numbers::pi / count);
    const double stop = degrees_to_radians(cfg.refine_degrees);
    while (step >= stop) {
        const Vec& nu = best.nu;
        const Vec helper = std::abs(nu[0]) < 0.9 ? Vec{1.0, 0.0, 0.0} : Vec{0.0, 1.0, 0.0};
        const Vec t1 = unit(helper - dot(helper, nu) * nu);
        const Vec t2{nu[1] * t1[2] - nu[2] * t1[1], nu[2] * t1[0] - nu[0] * t1[2], nu[0] * t1[1] - nu[1] * t1[0]};
        bool moved = false;
        const double t = std::tan(step);
        for (const auto& [c1, c2] : {std::pair{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0},
                                     {0.7071067811865476, 0.7071067811865476}, {-0.7071067811865476, 0.7071067811865476},
                                     {0.7071067811865476, -0.7071067811865476}, {-0.7071067811865476, -0.7071067811865476}}) {
            const Vec trial = unit(nu + t * (c1 * t1 + c2 * t2));
            const DirectionScore score = score_direction(v, trial, split);
            if (improves(score, best.score)) {
                best = {trial, score};
                moved = true;
                break;
            }
        }
        if (!moved) step *= 0.5;
    }
    return best;
}

/// Lazily evaluated blowup sequence shared by blowup_converge and the
/// classifier so both reach the same verdict.
class SequenceWalker {
public:
    SequenceWalker(const GridFunction& u, const Vec& x, const ClassifyConfig& cfg, const Tolerances& tol,
                   LatticePtr lattice)
        : u_(u), x_(x), cfg_(cfg), tol_(tol), lattice_(std::move(lattice)), radii_(point_schedule(u, x, cfg)) {
        samples_.resize(radii_.size());
        gaps_.assign(radii_.size() > 0 ? radii_.size() - 1 : 0, std::numeric_limits<double>::quiet_NaN());
    }

    const std::vector<double>& radii() const { return radii_; }

    bool sufficient() const { return static_cast<int>(radii_.size()) >= std::max(2, cfg_.min_radii); }

    const BlowupSample& sample(std::size_t k) {
        if (!samples_[k]) {
            samples_[k] = blowup_sample(u_, x_, radii_[k], lattice_, cfg_.min_radius_cells);
            ++computed_;
        }
        return *samples_[k];
    }

    double gap(std::size_t k) {
        if (std::isnan(gaps_[k])) gaps_[k] = l1_distance(sample(k), sample(k + 1));
        return gaps_[k];
    }

    /// Coarsest index of the first Cauchy window, or nullopt.
    std::optional<std::size_t> find_window() {
        const std::size_t w = static_cast<std::size_t>(std::max(1, cfg_.window_gaps));
        if (radii_.size() < w + 1) return std::nullopt;
        for (std::size_t start = radii_.size() - 1 - w + 1; start-- > 0;) {
            if (window_ok(start, w)) return start;
        }
        return std::nullopt;
    }

    std::size_t window_gaps() const { return static_cast<std::size_t>(std::max(1, cfg_.window_gaps)); }

    /// Follows sub-tolerance gaps upwards from `start`, staying at or below
    /// the fit radius cap.
    std::size_t run_top(std::size_t start) {
        const double cap = cfg_.max_fit_radius_cells * u_.spacing() * (1.0 + 1e-12);
        while (start > 0 && radii_[start - 1] <= cap && gap(start - 1) < gap_tolerance(start - 1)) --start;
        return start;
    }

    BlowupSequence take_all() {
        BlowupSequence seq;
        seq.x = x_;
        seq.radii = radii_;
        for (std::size_t k = 0; k < radii_.size(); ++k) seq.samples.push_back(sample(k));
        for (std::size_t k = 0; k + 1 < radii_.size(); ++k) seq.gaps.push_back(gap(k));
        return seq;
    }

    std::size_t computed() const { return computed_; }

private:
    double gap_tolerance(std::size_t k) const { return jumpset::gap_tolerance(tol_, u_.spacing(), radii_[k + 1]); }

    bool window_ok(std::size_t start, std::size_t w) {
        // Finest gap first: it is the one most likely to fail.
        for (std::size_t k = start + w; k-- > start;) {
            if (!(gap(k) < gap_tolerance(k))) return false;
        }
        for (std::size_t k = start; k + 1 < start + w; ++k) {
            if (gap(k + 1) > cfg_.slack * gap(k) + tol_.gap_floor) return false;
        }
        return true;
    }

    const GridFunction& u_;
    Vec x_;
    const ClassifyConfig& cfg_;
    Tolerances tol_;
    LatticePtr lattice_;
    std::vector<double> radii_;
    std::vector<std::optional<BlowupSample>> samples_;
    std::vector<double> gaps_;
    std::size_t computed_ = 0;
};

}  // namespace

Tolerances resolve_tolerances(const ClassifyConfig& cfg, double value_range) {
    const double range = value_range > 0.0 && std::isfinite(value_range) ? value_range : 1.0;
    Tolerances t;
    t.cauchy = cfg.tol_cauchy * range;
    t.constant = cfg.tol_const * range;
    t.jump = cfg.tol_jump * range;
    t.separation = cfg.sep_min * range;
    t.gap_floor = 0.1 * t.cauchy;
    t.interp = cfg.interp_allowance * range;
    return t;
}

Tolerances resolve_tolerances(const ClassifyConfig& cfg, const GridFunction& u) {
    if (cfg.value_range > 0.0) return resolve_tolerances(cfg, cfg.value_range);
    const auto [lo, hi] = u.finite_range();
    return resolve_tolerances(cfg, hi - lo);
}

double gap_tolerance(const Tolerances& tol, double spacing, double finer_radius) {
    return tol.cauchy + tol.interp * spacing / finer_radius;
}

std::vector<double> radius_schedule(double r_top, double r_min, double sigma) {
    if (!(sigma > 0.0 && sigma < 1.0)) throw Error(Errc::InvalidArgument, "sigma must lie in (0, 1)");
    if (!(r_min > 0.0)) throw Error(Errc::InvalidArgument, "r_min must be positive");
    std::vector<double> radii;
    for (int k = 0;; ++k) {
        const double r = r_top * std::pow(sigma, k);
        if (r < r_min * (1.0 - 1e-12)) break;
        radii.push_back(r);
    }
    return radii;
}

std::vector<double> point_schedule(const GridFunction& u, const Vec& x, const ClassifyConfig& cfg) {
    if (!(cfg.sigma > 0.0 && cfg.sigma < 1.0)) throw Error(Errc::InvalidArgument, "sigma must lie in (0, 1)");
    const double h = u.spacing();
    const double r_min = cfg.min_radius_cells * h;
    const double limit = std::min(u.distance_to_boundary(x), cfg.max_radius_cells * h);
    std::vector<double> radii;
    for (int k = 0;; ++k) {
        const double r = r_min * std::pow(cfg.sigma, -k);
        if (r > limit * (1.0 + 1e-12) || !blowup_fits(u, x, r)) break;
        radii.push_back(r);
    }
    std::reverse(radii.begin(), radii.end());
    return radii;
}

Convergence blowup_converge(const GridFunction& u, const Vec& x, const ClassifyConfig& cfg) {
    const Tolerances tol = resolve_tolerances(cfg, u);
    SequenceWalker walker(u, x, cfg, tol, make_lattice(u.dim(), cfg.lattice_resolution));
    if (!walker.sufficient()) {
        throw Error(Errc::Insufficient, "only " + std::to_string(walker.radii().size()) + " radii fit at this point");
    }
    Convergence result;
    const auto window = walker.find_window();
    if (window) {
        result.verdict = Verdict::Converged;
        result.limit_index = *window + walker.window_gaps();
        result.fit_index = walker.run_top(*window);
    }
    result.sequence = walker.take_all();
    if (!window) {
        result.verdict = Verdict::NonConvergent;
        result.limit_index = result.sequence.radii.size() - 1;
        result.fit_index = result.limit_index;
    }
    return result;
}

ConstantFit fit_constant(const BlowupSample& v) {
    const L1Fit fit = l1_fit(v, full_region(*v.lattice));
    return {fit.median, fit.osc()};
}

double jump_residual(const BlowupSample& v, double a, double b, const Vec& nu) {
    const auto& nodes = v.lattice->nodes();
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double value = v.values[i];
        if (std::isnan(value)) continue;
        const double s = dot(nu, nodes[i]);
        double err;
        if (s > kPlaneEps) {
            err = std::abs(value - a);
        } else if (s < -kPlaneEps) {
            err = std::abs(value - b);
        } else {
            err = 0.5 * (std::abs(value - a) + std::abs(value - b));
        }
        acc += err;
        ++count;
    }
    if (count == 0) throw Error(Errc::AllUndefined, "sample has no defined nodes");
    return acc / static_cast<double>(count);
}

JumpFit fit_jump(const BlowupSample& v, const ClassifyConfig& cfg) {
    if (!v.lattice) throw Error(Errc::LatticeMismatch, "sample has no lattice");
    for (double value : v.values) {
        if (std::isinf(value)) throw Error(Errc::NonFiniteValues, "jump fit needs finite values");
    }
    Candidate best;
    switch (v.lattice->dim()) {
        case 1: best = fit_1d(v); break;
        case 2: best = fit_2d(v, cfg); break;
        default: best = fit_3d(v, cfg); break;
    }
    if (best.score.smaller_half < kMinRegionNodes) {
        throw Error(Errc::DegenerateHalf, "a half-ball has fewer than 8 defined nodes");
    }
    JumpFit fit{best.score.a, best.score.b, best.nu, best.score.residual};
    if (fit.a < fit.b) {
        std::swap(fit.a, fit.b);
        fit.nu = -fit.nu;
    }
    return fit;
}

OffsetFit fit_interface_offset(const BlowupSample& v, double a, double b, const Vec& nu) {
    const auto& nodes = v.lattice->nodes();
    struct Entry {
        double s;
        double cost_above;  // |v - a|
        double cost_below;  // |v - b|
    };
    std::vector<Entry> entries;
    entries.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double value = v.values[i];
        if (std::isnan(value)) continue;
        entries.push_back({dot(nu, nodes[i]), std::abs(value - a), std::abs(value - b)});
    }
    if (entries.empty()) throw Error(Errc::AllUndefined, "sample has no defined nodes");
    std::sort(entries.begin(), entries.end(), [](const Entry& l, const Entry& r) { return l.s < r.s; });

    // Split after position k: entries [0, k) take b, [k, n) take a.
    double cost = 0.0;
    for (const Entry& e : entries) cost += e.cost_above;
    const std::size_t n = entries.size();
    auto threshold = [&](std::size_t k) {
        if (k == 0) return entries.front().s - 1.0 / v.lattice->resolution();
        if (k == n) return entries.back().s + 1.0 / v.lattice->resolution();
        return 0.5 * (entries[k - 1].s + entries[k].s);
    };
    double best_cost = cost;
    double best_t = threshold(0);
    for (std::size_t k = 1; k <= n; ++k) {
        cost += entries[k - 1].cost_below - entries[k - 1].cost_above;
        if (k < n && entries[k].s == entries[k - 1].s) continue;
        const double t = threshold(k);
        const double margin = kTieEps * (1.0 + best_cost);
        if (cost < best_cost - margin || (cost <= best_cost + margin && std::abs(t) < std::abs(best_t))) {
            best_cost = std::min(cost, best_cost);
            best_t = t;
        }
    }
    return {best_t, best_cost / static_cast<double>(n)};
}

ClassCode class_code(const PointClass& c) {
    switch (c.index()) {
        case 0: return ClassCode::ApproxContinuous;
        case 1: return ClassCode::Jump;
        case 2: return ClassCode::SingularNonJump;
        case 3: return ClassCode::NonConvergent;
        default: return ClassCode::Insufficient;
    }
}

std::string_view class_name(const PointClass& c) {
    switch (c.index()) {
        case 0: return "approx_continuous";
        case 1: return "jump";
        case 2: return "singular_non_jump";
        case 3: return "non_convergent";
        default: return "insufficient";
    }
}

PointReport classify_point_report(const GridFunction& u, const Vec& x, const ClassifyConfig& cfg,
                                  const Tolerances& tol, const LatticePtr& lattice) {
    PointReport report;
    SequenceWalker walker(u, x, cfg, tol, lattice);
    if (!walker.sufficient()) return report;
    try {
        const auto window = walker.find_window();
        report.samples_used = walker.computed();
        if (!window) {
            report.cls = NonConvergent{};
            return report;
        }
        const std::size_t k = *window + walker.window_gaps();
        const BlowupSample& v = walker.sample(k);
        const L1Fit fit = l1_fit(v, full_region(*v.lattice));
        const double next = osc(walker.sample(k - 1), full_region(*v.lattice));
        const double r = walker.radii()[k];
        const double r_next = walker.radii()[k - 1];
        report.limit_radius = r;
        report.limit_osc = fit.osc();
        report.extrapolated_osc = std::max(0.0, fit.osc() - (next - fit.osc()) * r / (r_next - r));

        if (report.limit_osc < tol.constant || report.extrapolated_osc < tol.constant) {
            report.samples_used = walker.computed();
            report.cls = ApproxContinuous{fit.median};
            return report;
        }
        const std::size_t top = walker.run_top(*window);
        report.fit_radius = walker.radii()[top];
        const JumpFit jump = fit_jump(walker.sample(top), cfg);
        report.samples_used = walker.computed();
        const bool separated = std::abs(jump.a - jump.b) >= tol.separation;
        if (separated) {
            const OffsetFit shifted = fit_interface_offset(v, jump.a, jump.b, jump.nu);
            report.interface_offset = std::abs(shifted.offset) * r;
            if (shifted.residual < tol.jump && report.interface_offset > cfg.max_offset_cells * u.spacing()) {
                report.cls = ApproxContinuous{shifted.offset > 0.0 ? jump.b : jump.a};
                return report;
            }
        }
        if (jump.residual < tol.jump && separated) {
            report.cls = Jump{jump};
        } else {
            report.cls = SingularNonJump{report.limit_osc};
        }
    } catch (const Error&) {
        // Non-finite samples without the arctan route, or degenerate halves.
        report.cls = Insufficient{};
    }
    return report;
}

PointClass classify_point(const GridFunction& u, const Vec& x, const ClassifyConfig& cfg) {
    return classify_point_report(u, x, cfg, resolve_tolerances(cfg, u), make_lattice(u.dim(), cfg.lattice_resolution))
        .cls;
}

Ball find_quiet_ball(const BlowupSample& v, double delta, std::span<const Ball> family) {
    if (family.empty()) throw Error(Errc::InvalidArgument, "empty ball family");
    for (const Ball& ball : family) {
        const Region region = ball_region(*v.lattice, ball);
        if (region.size() < kMinRegionNodes) continue;
        try {
            if (osc(v, region) < 0.5 * delta) return ball;
        } catch (const Error&) {
        }
    }
    throw Error(Errc::NoQuietBall, "no family ball oscillates less than delta/2");
}

std::vector<PointReport> classify_grid(const GridFunction& u, const ClassifyConfig& cfg, int workers) {
    const Tolerances tol = resolve_tolerances(cfg, u);
    const LatticePtr lattice = make_lattice(u.dim(), cfg.lattice_resolution);
    std::vector<PointReport> out(u.size());
    parallel_for(u.size(), workers,
                 [&](std::size_t i) { out[i] = classify_point_report(u, u.cell_center(i), cfg, tol, lattice); });
    return out;
}

std::vector<PointReport> classify_grid_serial(const GridFunction& u, const ClassifyConfig& cfg) {
    const Tolerances tol = resolve_tolerances(cfg, u);
    const LatticePtr lattice = make_lattice(u.dim(), cfg.lattice_resolution);
    std::vector<PointReport> out;
    out.reserve(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        out.push_back(classify_point_report(u, u.cell_center(i), cfg, tol, lattice));
    }
    return out;
}

}  // namespace jumpset
