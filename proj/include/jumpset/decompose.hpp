#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "jumpset/grid.hpp"

namespace jumpset {

/// Balls B_q(c) with c on the dyadic lattice 2^-depth Z^n, q in
/// {1/2, ..., 2^-depth} and |c| + q < 1. Ordered by q descending, then by
/// centre lexicographically. Containment is decided in exact integer
/// arithmetic.
std::vector<Ball> rational_ball_family(int depth, int dim);

/// Parameters of one decomposition piece. `radii` samples (0, r0]
/// geometrically from r0 down to the grid's r_min.
struct ESetParams {
    double delta = 0.0;
    double tau = 0.5;
    Ball ball;
    double r0 = 0.0;
    std::vector<double> radii;
};

/// Radii r0 * sigma^k down to min_radius_cells * h. Throws InvalidArgument
/// for tau outside (0,1), non-positive delta, a ball not strictly inside
/// B_1, or r0 below the grid guard.
ESetParams make_eset_params(double delta, double tau, const Ball& ball, double r0, double spacing,
                            double sigma = 0.8408964152537145, double min_radius_cells = kDefaultMinRadiusCells);

/// True iff osc(u^{x,r}, B_1) >= delta and osc(u^{x,r}, B) <= tau * delta for
/// every sampled r. Throws Error(Insufficient) if some radius cannot be
/// sampled at x, and InvalidArgument if B captures fewer than 8 nodes.
bool e_set_membership(const GridFunction& u, const Vec& x, const ESetParams& params, const LatticePtr& lattice);

/// Exclusion cone {r z : z in B_eps(z0), 0 < r <= range} for B = B_rho(z0).
struct ConeSpec {
    int dim = 0;
    Vec z0{};
    Vec axis{};               // z0 / |z0|
    double z0_norm = 0.0;
    double rho = 0.0;
    double rho_prime = 0.0;   // tau^(1/n) rho / 2
    double eps = 0.0;         // rho - rho'
    double sin_half_aperture = 0.0;
    double lipschitz = 0.0;   // sqrt(|z0|^2 - eps^2) / eps
    double range = 0.0;       // r0
};

/// Throws Error(DegenerateCone) if z0 = 0 or eps >= |z0|, InvalidArgument
/// for tau outside (0,1), r0 <= 0 or a ball not strictly inside B_1.
ConeSpec cone_from_params(const Ball& ball, double tau, double r0, int dim);

/// Whether some r in (0, range] satisfies |d - r z0| <= r eps. Closed form:
/// the quadratic |d|^2 - 2 r <d, z0> + r^2 (|z0|^2 - eps^2) <= 0 must have a
/// root interval meeting (0, range]. d = 0 is never inside.
bool in_cone(const Vec& d, const ConeSpec& cone);

/// in_cone(d) or in_cone(-d).
bool in_cone_symmetric(const Vec& d, const ConeSpec& cone);

/// A radius r witnessing in_cone(d), or nullopt.
std::optional<double> cone_witness(const Vec& d, const ConeSpec& cone);

/// Extracted E_{delta,tau,B,r0}. `indices` are row-major grid indices.
struct ESet {
    ESetParams params;
    int dim = 0;
    double spacing = 0.0;
    std::vector<Vec> points;
    std::vector<std::size_t> indices;
    std::size_t insufficient = 0;  // points where some radius did not fit
};

ESet extract_e_set(const GridFunction& u, const ESetParams& params, const LatticePtr& lattice, int workers);
ESet extract_e_set_serial(const GridFunction& u, const ESetParams& params, const LatticePtr& lattice);

/// Unordered violating pair, i < j.
struct ConePair {
    std::size_t i = 0;
    std::size_t j = 0;

    bool operator==(const ConePair&) const = default;
};

/// All pairs farther apart than `guard` whose difference lies in the
/// symmetrised cone, sorted by (i, j).
std::vector<ConePair> verify_cone_property(std::span<const Vec> points, const ConeSpec& cone, double guard,
                                           int workers);
std::vector<ConePair> verify_cone_property_serial(std::span<const Vec> points, const ConeSpec& cone, double guard);

/// |<d, e>| / |d - <d, e> e|; +inf when d is parallel to the axis.
double graph_slope(const Vec& d, const ConeSpec& cone);

struct CoverCell {
    std::array<long long, 3> id{};
    std::vector<std::size_t> members;
    bool pass = true;
    double worst_slope = 0.0;
    bool infinite_slope = false;
};

struct CoverReport {
    ConeSpec cone;
    double cell_side = 0.0;  // r0 (|z0| - eps) / sqrt(n)
    std::vector<CoverCell> cells;

    bool all_pass() const;
    double worst_slope() const;
};

/// Partitions points into cubes of side `cell_side` and checks, per cube,
/// that every pair satisfies |<d, e>| <= L |d_perp| (+1e-12), i.e. that the
/// cube's points lie on one Lipschitz graph over the axis' orthogonal
/// hyperplane. Cells are ordered by id.
CoverReport cover_with_graphs(std::span<const Vec> points, const ConeSpec& cone);

/// Batched extraction for many (delta, B) pairs at one r0: each point's
/// blowups are sampled once, finest radius first, and abandoned as soon as
/// osc(B_1) drops below the smallest delta.
struct SweepResult {
    double r0 = 0.0;
    std::vector<double> radii;
    std::vector<ESet> sets;  // deltas-major, then family order; excluded balls skipped
};

SweepResult sweep_e_sets(const GridFunction& u, std::span<const double> deltas, double tau,
                         std::span<const Ball> family, double r0, const LatticePtr& lattice, int workers,
                         double sigma = 0.8408964152537145);

}  // namespace jumpset
