#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "jumpset/grid.hpp"

namespace jumpset {

/// Knobs for blowup analysis. Tolerances are fractions of the value range
/// (max - min of the finite grid values unless `value_range` is set).
struct ClassifyConfig {
    double sigma = 0.8408964152537145;  // 2^(-1/4)
    double min_radius_cells = kDefaultMinRadiusCells;
    double max_radius_cells = 32.0;
    int lattice_resolution = 33;
    int min_radii = 4;
    int window_gaps = 3;
    double slack = 1.5;
    double tol_cauchy = 0.02;
    double interp_allowance = 0.03;  // extra Cauchy slack per unit of h / r
    double tol_const = 0.01;
    double tol_jump = 0.2;
    double sep_min = 0.1;
    double max_offset_cells = 0.75;
    double max_fit_radius_cells = 12.0;
    double value_range = 0.0;
    int directions_2d = 360;
    int directions_3d = 512;
    double refine_degrees = 0.1;
};

/// Absolute thresholds after scaling by the value range.
struct Tolerances {
    double cauchy = 0.0;
    double constant = 0.0;
    double jump = 0.0;
    double separation = 0.0;
    double gap_floor = 0.0;  // absolute slack on the non-increasing gap test
    double interp = 0.0;     // Cauchy allowance for interpolation, multiplied by h / r
};

Tolerances resolve_tolerances(const ClassifyConfig& cfg, double value_range);
Tolerances resolve_tolerances(const ClassifyConfig& cfg, const GridFunction& u);

/// Cauchy bound for the gap between a radius and the next finer one r:
/// cauchy + interp * h / r.
double gap_tolerance(const Tolerances& tol, double spacing, double finer_radius);

/// r_top * sigma^k for k = 0, 1, ... while >= r_min; strictly decreasing.
std::vector<double> radius_schedule(double r_top, double r_min, double sigma);

/// Radii used to analyse x: the geometric schedule anchored at r_min and
/// extended upwards while x + r B_1 fits in the domain and r <= the cap.
/// Returned in decreasing order.
std::vector<double> point_schedule(const GridFunction& u, const Vec& x, const ClassifyConfig& cfg);

struct BlowupSequence {
    Vec x{};
    std::vector<double> radii;  // decreasing
    std::vector<BlowupSample> samples;
    std::vector<double> gaps;   // gaps[k] = l1_distance(samples[k], samples[k + 1])
};

enum class Verdict { Converged, NonConvergent };

struct Convergence {
    BlowupSequence sequence;
    Verdict verdict = Verdict::NonConvergent;
    std::size_t limit_index = 0;  // smallest radius of the accepted window
    std::size_t fit_index = 0;    // coarsest radius of the Cauchy run containing the window
};

/// Full blowup sequence at x plus the Cauchy verdict. Windows of
/// `window_gaps` consecutive gaps are scanned from the finest scale upwards;
/// the gap between radii r' > r is compared against
/// tol_cauchy + interp_allowance * h / r, since multilinear interpolation
/// blurs every interface over a band of width h. The first window whose gaps
/// are all below that bound and non-increasing
/// towards r -> 0 (within `slack`) is accepted and its smallest radius is the
/// limit. The run of sub-tolerance gaps is then followed upwards from the
/// window, up to max_fit_radius_cells; its coarsest radius is `fit_index`.
/// Throws Error(Insufficient) when fewer than `min_radii` radii fit.
Convergence blowup_converge(const GridFunction& u, const Vec& x, const ClassifyConfig& cfg = {});

struct ConstantFit {
    double c = 0.0;
    double residual = 0.0;
};

/// Lower median of the sample and its oscillation over B_1.
ConstantFit fit_constant(const BlowupSample& v);

struct JumpFit {
    double a = 0.0;  // value on {nu . y > 0}
    double b = 0.0;  // value on {nu . y < 0}
    Vec nu{};
    double residual = 0.0;
};

/// Mean |v - u_{a,b,nu}| over the defined lattice nodes. Nodes on the
/// hyperplane nu . y = 0 are charged (|v - a| + |v - b|) / 2, as if split
/// evenly between the two sides.
double jump_residual(const BlowupSample& v, double a, double b, const Vec& nu);

/// Best jump function: for each direction the half-ball lower medians, then
/// the direction with smallest residual. Coarse search (360 directions in
/// 2D, a Fibonacci sphere in 3D) followed by local refinement to
/// `refine_degrees`. In 2D the midpoint of the arc of directions within half
/// a node weight of the minimum is returned. In 1D both orientations are
/// tried. The result is
/// oriented so that a >= b. Throws DegenerateHalf if a half-ball of the
/// winning direction has fewer than 8 defined nodes.
JumpFit fit_jump(const BlowupSample& v, const ClassifyConfig& cfg = {});

/// Jump with a shifted interface {nu . y > t} and fixed (a, b).
struct OffsetFit {
    double offset = 0.0;  // t, in blowup coordinates
    double residual = 0.0;
};

/// Best threshold t along nu for the two-valued model a on {nu . y > t},
/// b elsewhere. Among equally good thresholds the one closest to 0 wins.
OffsetFit fit_interface_offset(const BlowupSample& v, double a, double b, const Vec& nu);

struct ApproxContinuous {
    double value = 0.0;
};
struct Jump {
    JumpFit fit;
};
struct SingularNonJump {
    double osc_of_limit = 0.0;
};
struct NonConvergent {};
struct Insufficient {};

using PointClass = std::variant<ApproxContinuous, Jump, SingularNonJump, NonConvergent, Insufficient>;

/// Raster codes for class maps.
enum class ClassCode : std::uint8_t {
    ApproxContinuous = 0,
    Jump = 64,
    SingularNonJump = 128,
    NonConvergent = 192,
    Insufficient = 255,
};

ClassCode class_code(const PointClass& c);
std::string_view class_name(const PointClass& c);

template <class T>
bool holds(const PointClass& c) {
    return std::holds_alternative<T>(c);
}

/// Classification plus the numbers it was based on.
struct PointReport {
    PointClass cls = Insufficient{};
    double limit_radius = 0.0;
    double limit_osc = 0.0;         // osc(v, B_1) of the limit sample
    double extrapolated_osc = 0.0;  // linear extrapolation of osc(u^{x,r}, B_1) to r = 0
    double fit_radius = 0.0;        // radius of the sample the jump model was fitted on
    double interface_offset = 0.0;  // physical distance from x to the fitted interface
    std::size_t samples_used = 0;
};

/// Classifies x. The blowup counts as constant when osc(v, B_1) or its
/// linear extrapolation to r = 0 across the accepted window is below
/// tol_const. Otherwise the jump model is fitted on the coarsest sample of
/// the Cauchy run, where interpolation artifacts are smallest. If the limit
/// sample is explained by that model with its interface shifted more than
/// `max_offset_cells` away from x, the interface misses x and the blowup at
/// r -> 0 is the constant of x's side. Otherwise x is a jump when the
/// centred residual is below tol_jump and |a - b| >= sep_min, and singular
/// if not.
PointReport classify_point_report(const GridFunction& u, const Vec& x, const ClassifyConfig& cfg,
                                  const Tolerances& tol, const LatticePtr& lattice);

PointClass classify_point(const GridFunction& u, const Vec& x, const ClassifyConfig& cfg = {});

/// First ball of `family` (with at least 8 lattice nodes) on which the
/// sample oscillates less than delta / 2. Throws NoQuietBall.
Ball find_quiet_ball(const BlowupSample& v, double delta, std::span<const Ball> family);

/// Classification of every cell centre. The OpenMP version distributes
/// points over `workers` threads; results are identical to the serial one.
std::vector<PointReport> classify_grid(const GridFunction& u, const ClassifyConfig& cfg, int workers);
std::vector<PointReport> classify_grid_serial(const GridFunction& u, const ClassifyConfig& cfg);

}  // namespace jumpset
