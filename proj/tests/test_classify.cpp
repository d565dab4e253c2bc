#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "jumpset/classify.hpp"
#include "jumpset/oscillation.hpp"
#include "jumpset/synth.hpp"

using namespace jumpset;
using Catch::Matchers::WithinAbs;

namespace {

GridFunction corpus_grid(const std::string& kind, int resolution, std::map<std::string, double> params = {}) {
    CorpusSpec spec;
    spec.kind = kind;
    spec.resolution = resolution;
    spec.params = std::move(params);
    return generate(spec).u;
}

BlowupSample jump_sample(const LatticePtr& lattice, double a, double b, const Vec& nu, double t = 0.0) {
    BlowupSample s{Vec{}, 0.1, lattice, {}};
    for (const Vec& y : lattice->nodes()) s.values.push_back(dot(nu, y) > t ? a : b);
    return s;
}

double angle_degrees(const Vec& a, const Vec& b) {
    return std::acos(std::min(1.0, std::abs(dot(a, b)))) * 180.0 / std::numbers::pi;
}

}  // namespace

TEST_CASE("radius schedules", "[classify]") {
    const std::vector<double> r = radius_schedule(1.0, 0.2, 0.5);
    CHECK(r == std::vector<double>{1.0, 0.5, 0.25});
    CHECK_THROWS_AS(radius_schedule(1.0, 0.2, 1.0), Error);

    const GridFunction u = corpus_grid("smooth", 64);
    const ClassifyConfig cfg;
    const std::vector<double> s = point_schedule(u, Vec{}, cfg);
    REQUIRE(s.size() >= 4);
    CHECK_THAT(s.back(), WithinAbs(cfg.min_radius_cells * u.spacing(), 1e-12));
    CHECK(s.front() <= cfg.max_radius_cells * u.spacing() + 1e-12);
    for (std::size_t k = 1; k < s.size(); ++k) CHECK_THAT(s[k] / s[k - 1], WithinAbs(cfg.sigma, 1e-12));
}

TEST_CASE("tolerances scale with the value range", "[classify]") {
    ClassifyConfig cfg;
    const Tolerances t = resolve_tolerances(cfg, 4.0);
    CHECK(t.cauchy == 4.0 * cfg.tol_cauchy);
    CHECK(t.jump == 4.0 * cfg.tol_jump);
    CHECK(gap_tolerance(t, 0.01, 0.1) == t.cauchy + t.interp * 0.1);
    cfg.value_range = 2.0;
    const GridFunction u = corpus_grid("disk", 32);  // range 2 anyway
    CHECK(resolve_tolerances(cfg, u).constant == 2.0 * cfg.tol_const);
}

TEST_CASE("jump fit recovers exact half-ball values", "[classify]") {
    const LatticePtr lattice = make_lattice(2, 33);
    const Vec nu{std::cos(0.3), std::sin(0.3), 0};
    const JumpFit fit = fit_jump(jump_sample(lattice, 1.0, 0.25, nu));
    CHECK(fit.a == 1.0);
    CHECK(fit.b == 0.25);
    CHECK(angle_degrees(fit.nu, nu) < 1.0);
    CHECK(fit.residual < 0.01);
    CHECK(dot(fit.nu, nu) > 0);
}

TEST_CASE("jump fit direction agrees with a brute-force scan", "[classify]") {
    // A quarter plane is not a jump function; the best fitting direction is
    // found independently by scanning every 0.05 degrees.
    const LatticePtr lattice = make_lattice(2, 33);
    BlowupSample s{Vec{}, 0.1, lattice, {}};
    for (const Vec& y : lattice->nodes()) s.values.push_back(y[0] > 0 && y[1] > 0 ? 1.0 : 0.0);
    const JumpFit fit = fit_jump(s);
    double best = INFINITY;
    for (int k = 0; k < 7200; ++k) {
        const double t = k * 0.05 * std::numbers::pi / 180.0;
        const Vec nu{std::cos(t), std::sin(t), 0};
        std::vector<double> pos, neg;
        for (std::size_t i = 0; i < lattice->size(); ++i) {
            const double d = dot(nu, lattice->node(i));
            if (d > 1e-12) pos.push_back(s.values[i]);
            if (d < -1e-12) neg.push_back(s.values[i]);
        }
        if (pos.size() < 8 || neg.size() < 8) continue;
        best = std::min(best, jump_residual(s, lower_median_inplace(pos), lower_median_inplace(neg), nu));
    }
    CHECK(fit.residual <= best + 0.5 / lattice->size() + 1e-12);
}

TEST_CASE("interface offset fit", "[classify]") {
    const LatticePtr lattice = make_lattice(2, 33);
    const Vec e1{1, 0, 0};
    const OffsetFit off = fit_interface_offset(jump_sample(lattice, 1, 0, e1, 0.4), 1, 0, e1);
    CHECK(off.residual == 0.0);
    CHECK(off.offset > 0.3);
    CHECK(off.offset < 0.45);
    CHECK(fit_interface_offset(jump_sample(lattice, 1, 0, e1), 1, 0, e1).offset == Catch::Approx(0.0).margin(1.0 / 16));
}

TEST_CASE("point classes on the corpus", "[classify]") {
    const ClassifyConfig cfg;
    const GridFunction half = corpus_grid("halfplane", 64);
    const double h = half.spacing();
    const PointClass on = classify_point(half, Vec{h / 2, 0.1, 0}, cfg);
    REQUIRE(holds<Jump>(on));
    const JumpFit& fit = std::get<Jump>(on).fit;
    CHECK(fit.a == 1.0);
    CHECK(fit.b == 0.0);
    CHECK(angle_degrees(fit.nu, Vec{1, 0, 0}) <= 2.0);

    const PointClass off = classify_point(half, Vec{0.3, 0.1, 0}, cfg);
    REQUIRE(holds<ApproxContinuous>(off));
    CHECK(std::get<ApproxContinuous>(off).value == 1.0);

    CHECK(holds<Insufficient>(classify_point(half, Vec{0.99, 0.0, 0}, cfg)));
    CHECK(holds<ApproxContinuous>(classify_point(corpus_grid("smooth", 64), Vec{0.2, -0.1, 0}, cfg)));
    CHECK(holds<SingularNonJump>(classify_point(corpus_grid("homogeneous", 128), Vec{}, cfg)));
    CHECK(holds<NonConvergent>(classify_point(corpus_grid("logspiral", 128), Vec{}, cfg)));
}

TEST_CASE("homogeneous blowups are scale invariant", "[classify]") {
    // osc of |y_1|/|y| over B_1: median cos(pi/4), mean deviation
    // (2/pi)(sqrt 2 - 1) by direct integration over the angle.
    const double exact = 2.0 / std::numbers::pi * (std::sqrt(2.0) - 1.0);
    const GridFunction u = corpus_grid("homogeneous", 256);
    const Convergence c = blowup_converge(u, Vec{}, ClassifyConfig{});
    const auto& seq = c.sequence;
    // Away from the finest scales interpolation matters little.
    CHECK_THAT(fit_constant(seq.samples.front()).residual, WithinAbs(exact, 0.02));
    const Tolerances tol = resolve_tolerances(ClassifyConfig{}, u);
    for (std::size_t k = 0; k < seq.gaps.size(); ++k) {
        CHECK(seq.gaps[k] <= gap_tolerance(tol, u.spacing(), seq.radii[k + 1]));
    }
}

TEST_CASE("log spiral gaps follow the analytic rotation", "[classify]") {
    // u^{0,r}(y) = sin(log r + log|y|): consecutive radii shift the phase by
    // log(1/sigma), so the gap is bounded below by a constant fraction of
    // the range and never settles.
    const GridFunction u = corpus_grid("logspiral", 256);
    const Convergence c = blowup_converge(u, Vec{}, ClassifyConfig{});
    CHECK(c.verdict == Verdict::NonConvergent);
    double smallest = INFINITY;
    for (double g : c.sequence.gaps) smallest = std::min(smallest, g);
    CHECK(smallest > 0.02 * 2.0);
}

TEST_CASE("class codes", "[classify]") {
    CHECK(class_code(ApproxContinuous{}) == ClassCode::ApproxContinuous);
    CHECK(static_cast<int>(class_code(Jump{})) == 64);
    CHECK(static_cast<int>(class_code(SingularNonJump{})) == 128);
    CHECK(static_cast<int>(class_code(NonConvergent{})) == 192);
    CHECK(static_cast<int>(class_code(Insufficient{})) == 255);
    CHECK(class_name(Jump{}) == "jump");
}

TEST_CASE("quiet ball search", "[classify]") {
    const LatticePtr lattice = make_lattice(2, 33);
    const BlowupSample s = jump_sample(lattice, 1, 0, Vec{1, 0, 0});
    const std::vector<Ball> family{{{0, 0, 0}, 0.5}, {{0.5, 0, 0}, 0.25}};
    const Ball b = find_quiet_ball(s, 0.4, family);
    CHECK(b.center[0] == 0.5);
    CHECK_THROWS_AS(find_quiet_ball(s, 0.4, std::vector<Ball>{{{0, 0, 0}, 0.5}}), Error);
}

TEST_CASE("parallel grid classification matches the serial reference", "[classify][parallel]") {
    const GridFunction u = corpus_grid("disk", 48);
    const ClassifyConfig cfg;
    const auto serial = classify_grid_serial(u, cfg);
    const auto parallel = classify_grid(u, cfg, 4);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].cls.index() == parallel[i].cls.index());
        CHECK(serial[i].limit_osc == parallel[i].limit_osc);
        if (const auto* j = std::get_if<Jump>(&serial[i].cls)) {
            const auto& k = std::get<Jump>(parallel[i].cls);
            CHECK(j->fit.nu == k.fit.nu);
        }
    }
}

TEST_CASE("one-dimensional jumps", "[classify]") {
    CorpusSpec spec;
    spec.kind = "halfplane";
    spec.dim = 1;
    spec.resolution = 128;
    const GridFunction u = generate(spec).u;
    const PointClass c = classify_point(u, Vec{u.spacing() / 2, 0, 0});
    REQUIRE(holds<Jump>(c));
    CHECK(std::get<Jump>(c).fit.a == 1.0);
}
