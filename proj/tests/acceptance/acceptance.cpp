// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance [--only 1,2,...] [--expect-fail 3,4]
//
// Exit status is 0 when the set of failing criteria equals the expected set.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "jumpset/classify.hpp"
#include "jumpset/cli.hpp"
#include "jumpset/decompose.hpp"
#include "jumpset/extended.hpp"
#include "jumpset/oscillation.hpp"
#include "jumpset/parallel.hpp"
#include "jumpset/report.hpp"
#include "jumpset/synth.hpp"

namespace fs = std::filesystem;
using namespace jumpset;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double angle_degrees(const Vec& a, const Vec& b) {
    const double c = std::abs(dot(a, b)) / (norm(a) * norm(b));
    return std::acos(std::min(1.0, c)) * 180.0 / std::numbers::pi;
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

GridFunction transformed(const GridFunction& u) { return phi_apply(u); }

int run_tool(std::vector<std::string> args) {
    args.insert(args.begin(), "jumpset");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / ("jumpset_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

Outcome halfplane_recovery() {
    const Generated g = generate(corpus_by_name("halfplane_128"));
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<PointReport> rep = classify_grid_serial(g.u, ClassifyConfig{});
    const double secs = seconds_since(t0);
    const double h = g.u.spacing();
    std::size_t far = 0, far_bad = 0, band = 0, band_bad = 0, skipped = 0;
    double worst_a = 0, worst_b = 0, worst_angle = 0;
    const Vec e1{1, 0, 0};
    for (std::size_t i = 0; i < rep.size(); ++i) {
        const double d = std::abs(g.u.cell_center(i)[0]);
        if (holds<Insufficient>(rep[i].cls)) {
            if (d > 3 * h || d <= h / 2) ++skipped;
            continue;
        }
        if (d > 3 * h) {
            ++far;
            if (!holds<ApproxContinuous>(rep[i].cls)) ++far_bad;
        } else if (d <= h / 2) {
            ++band;
            const auto* j = std::get_if<Jump>(&rep[i].cls);
            if (!j) {
                ++band_bad;
                continue;
            }
            const bool same = dot(j->fit.nu, e1) > 0;
            const double ea = std::abs((same ? j->fit.a : j->fit.b) - 1.0);
            const double eb = std::abs(same ? j->fit.b : j->fit.a);
            const double ang = angle_degrees(j->fit.nu, e1);
            worst_a = std::max(worst_a, ea);
            worst_b = std::max(worst_b, eb);
            worst_angle = std::max(worst_angle, ang);
            if (ea > 0.02 || eb > 0.02 || ang > 2.0) ++band_bad;
        }
    }
    const bool pass = far_bad == 0 && band_bad == 0 && band > 0 && secs <= 60.0;
    return {pass, fmt("far %zu (non-AC %zu), band %zu (bad %zu), |a-1| %.4f |b| %.4f angle %.3f deg, "
                      "%zu boundary points insufficient, %.1f s serial",
                      far, far_bad, band, band_bad, worst_a, worst_b, worst_angle, skipped, secs)};
}

Outcome disk_recovery() {
    const Generated g = generate(corpus_by_name("disk_256"));
    const std::vector<PointReport> rep = classify_grid(g.u, ClassifyConfig{}, default_workers());
    const double h = g.u.spacing();
    const double radius = 0.3;
    std::vector<Vec> detected;
    double worst_angle = 0;
    for (std::size_t i = 0; i < rep.size(); ++i) {
        const auto* j = std::get_if<Jump>(&rep[i].cls);
        if (!j) continue;
        const Vec x = g.u.cell_center(i);
        detected.push_back(x);
        worst_angle = std::max(worst_angle, angle_degrees(j->fit.nu, x));
    }
    double to_circle = 0;
    for (const Vec& x : detected) to_circle = std::max(to_circle, std::abs(norm(x) - radius));
    double to_set = detected.empty() ? INFINITY : 0.0;
    const int samples = 4096;
    for (int k = 0; k < samples && !detected.empty(); ++k) {
        const double t = 2 * std::numbers::pi * k / samples;
        const Vec c{radius * std::cos(t), radius * std::sin(t), 0};
        double best = INFINITY;
        for (const Vec& x : detected) best = std::min(best, norm(x - c));
        to_set = std::max(to_set, best);
    }
    const double hausdorff = std::max(to_circle, to_set);
    const bool pass = !detected.empty() && hausdorff <= 2 * h && worst_angle <= 5.0;
    return {pass, fmt("%zu jump points, Hausdorff %.2f h (set->circle %.2f h, circle->set %.2f h), "
                      "worst normal angle %.3f deg",
                      detected.size(), hausdorff / h, to_circle / h, to_set / h, worst_angle)};
}

struct SweepTotals {
    std::size_t sets = 0, points = 0, degenerate = 0, violations = 0, cells = 0, failed_cells = 0;
    double worst_ratio = 0;  // worst slope / L over all cells
    double seconds = 0;
    std::string first_violation;
};

const SweepTotals& cone_sweep() {
    static const SweepTotals totals = [] {
        SweepTotals t;
        const auto t0 = std::chrono::steady_clock::now();
        const std::vector<double> deltas{0.1, 0.2, 0.4};
        const double tau = 0.5;
        for (const CorpusSpec& spec : list_corpus()) {
            if (spec.resolution != 128) continue;
            const Generated g = generate(spec);
            const GridFunction u = g.truth.bounded ? g.u : transformed(g.u);
            const std::vector<Ball> family = rational_ball_family(3, u.dim());
            const LatticePtr lattice = make_lattice(u.dim());
            for (double r0 : {0.25, 0.125}) {
                const SweepResult sweep = sweep_e_sets(u, deltas, tau, family, r0, lattice, default_workers());
                for (const ESet& set : sweep.sets) {
                    if (set.points.empty()) continue;
                    ++t.sets;
                    t.points += set.points.size();
                    ConeSpec cone;
                    try {
                        cone = cone_from_params(set.params.ball, tau, r0, u.dim());
                    } catch (const Error&) {
                        ++t.degenerate;
                        continue;
                    }
                    const auto pairs = verify_cone_property(set.points, cone, 2 * u.spacing(), default_workers());
                    if (!pairs.empty() && t.first_violation.empty()) {
                        const Vec& p = set.points[pairs[0].i];
                        const Vec& q = set.points[pairs[0].j];
                        t.first_violation = fmt("%s r0=%.3f delta=%.1f B=B_%.3f(%.3f,%.3f): (%.4f,%.4f)-(%.4f,%.4f)",
                                                spec.name().c_str(), r0, set.params.delta, set.params.ball.radius,
                                                set.params.ball.center[0], set.params.ball.center[1], p[0], p[1],
                                                q[0], q[1]);
                    }
                    t.violations += pairs.size();
                    const CoverReport cover = cover_with_graphs(set.points, cone);
                    t.cells += cover.cells.size();
                    for (const CoverCell& c : cover.cells) t.failed_cells += c.pass ? 0 : 1;
                    t.worst_ratio = std::max(t.worst_ratio, cover.worst_slope() / cone.lipschitz);
                }
            }
        }
        t.seconds = seconds_since(t0);
        return t;
    }();
    return totals;
}

Outcome cone_property() {
    const SweepTotals& t = cone_sweep();
    const bool pass = t.violations == 0 && t.seconds <= 300.0;
    std::string detail = fmt("%zu non-empty E-sets (%zu points, %zu degenerate cones), %zu violating pairs beyond 2h, "
                             "%.1f s",
                             t.sets, t.points, t.degenerate, t.violations, t.seconds);
    if (!t.first_violation.empty()) detail += "; first: " + t.first_violation;
    return {pass, detail};
}

Outcome lipschitz_cover() {
    const SweepTotals& t = cone_sweep();
    const bool pass = t.failed_cells == 0;
    return {pass, fmt("%zu of %zu cells fail; worst slope / L = %.3f", t.failed_cells, t.cells, t.worst_ratio)};
}

BlowupSample dyadic_sample(const LatticePtr& lattice, std::mt19937_64& rng, int levels) {
    std::uniform_int_distribution<int> pick(-levels, levels);
    BlowupSample s;
    s.lattice = lattice;
    s.values.resize(lattice->size());
    for (double& v : s.values) v = pick(rng) / 16.0;
    return s;
}

Region random_ball_region(const LatticePtr& lattice, std::mt19937_64& rng, double max_radius) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (;;) {
        Ball b;
        b.radius = max_radius * (0.2 + 0.8 * (unit(rng) + 1) / 2);
        for (int k = 0; k < lattice->dim(); ++k) b.center[k] = unit(rng) * (1 - b.radius);
        Region r = ball_region(*lattice, b);
        if (r.size() >= kMinRegionNodes) return r;
    }
}

std::vector<double> gather(const BlowupSample& s, const Region& region) {
    std::vector<double> out;
    for (std::size_t n : region.nodes) out.push_back(s.values[n]);
    return out;
}

Outcome oscillation_algebra() {
    std::mt19937_64 rng(20261016);
    std::uniform_int_distribution<int> dims(1, 3);
    std::uniform_int_distribution<int> shift(-64, 64);
    std::uniform_real_distribution<double> scale(-8.0, 8.0);
    std::uniform_int_distribution<int> probe(-2048, 2048);
    std::size_t translation_bad = 0, homogeneity_bad = 0, optimality_bad = 0, monotone_bad = 0;
    double worst_rel = 0;
    const LatticePtr lattices[3] = {make_lattice(1, 33), make_lattice(2, 17), make_lattice(3, 9)};
    for (int c = 0; c < 1000; ++c) {
        const LatticePtr& lattice = lattices[dims(rng) - 1];
        const BlowupSample s = dyadic_sample(lattice, rng, 64);
        const Region region = random_ball_region(lattice, rng, 1.0);
        const std::vector<double> v = gather(s, region);
        const double base = osc(v);

        const double t = shift(rng) / 8.0;
        std::vector<double> moved = v;
        for (double& x : moved) x += t;
        if (osc(moved) != base) ++translation_bad;

        const double lambda = scale(rng);
        std::vector<double> scaled = v;
        for (double& x : scaled) x *= lambda;
        const double expect = std::abs(lambda) * base;
        const double rel = std::abs(osc(scaled) - expect) / std::max(expect, 1e-300);
        if (expect > 0) worst_rel = std::max(worst_rel, rel);
        if (expect > 0 ? rel > 1e-12 : osc(scaled) != 0.0) ++homogeneity_bad;

        const L1Fit fit = l1_fit(v);
        for (int p = 0; p < 100; ++p) {
            const double k = probe(rng) / 256.0;
            double sum = 0;
            for (double x : v) sum += std::abs(x - k);
            if (sum < fit.deviation_sum) ++optimality_bad;
        }
    }
    for (int c = 0; c < 1000; ++c) {
        const LatticePtr& lattice = lattices[dims(rng) - 1];
        const BlowupSample s = dyadic_sample(lattice, rng, 64);
        const Region outer = random_ball_region(lattice, rng, 1.0);
        // A' is a random subset of A with at least one node.
        Region inner;
        std::bernoulli_distribution keep(0.5);
        for (std::size_t n : outer.nodes) {
            if (keep(rng)) {
                inner.nodes.push_back(n);
                inner.weights.push_back(1.0);
            }
        }
        if (inner.nodes.empty()) {
            inner.nodes.push_back(outer.nodes.front());
            inner.weights.push_back(1.0);
        }
        // N' osc(A') <= N osc(A), compared on exact deviation sums.
        const L1Fit a = l1_fit(gather(s, outer));
        const L1Fit a_inner = l1_fit(gather(s, inner));
        if (a_inner.deviation_sum > a.deviation_sum) ++monotone_bad;
    }
    const bool pass = translation_bad + homogeneity_bad + optimality_bad + monotone_bad == 0;
    return {pass, fmt("translation %zu, homogeneity %zu (worst rel %.2e), median optimality %zu of 100000 probes, "
                      "monotonicity %zu of 1000 nested pairs",
                      translation_bad, homogeneity_bad, worst_rel, optimality_bad, monotone_bad)};
}

Outcome analytic_oscillation() {
    std::string detail;
    bool pass = true;
    for (int m : {33, 65}) {
        const LatticePtr lattice = make_lattice(2, m);
        double worst_jump = 0, worst_linear = 0;
        for (int k = 0; k < 12; ++k) {
            const double t = 0.37 + k * std::numbers::pi / 6.0;
            const Vec nu{std::cos(t), std::sin(t), 0};
            std::vector<double> jump, linear;
            for (const Vec& y : lattice->nodes()) {
                const double s = dot(nu, y);
                jump.push_back(s > 0 ? 1.0 : 0.0);
                linear.push_back(2.5 * s);
            }
            worst_jump = std::max(worst_jump, std::abs(osc(jump) - 0.5));
            worst_linear = std::max(worst_linear, std::abs(osc(linear) - 2.5 * 4.0 / (3.0 * std::numbers::pi)));
        }
        pass = pass && worst_jump <= 2.0 / m && worst_linear <= 3.0 / m;
        detail += fmt("m=%d: jump err %.4f (bound %.4f), linear err %.4f (bound %.4f); ", m, worst_jump, 2.0 / m,
                      worst_linear, 3.0 / m);
    }
    return {pass, detail};
}

Outcome nonconvergence_and_homogeneous() {
    const ClassifyConfig cfg;
    std::string detail;
    bool pass = true;
    for (const char* name : {"logspiral_128", "logspiral_256"}) {
        const Generated g = generate(corpus_by_name(name));
        const PointClass c = classify_point(g.u, Vec{}, cfg);
        pass = pass && holds<NonConvergent>(c);
        detail += fmt("%s origin: %s; ", name, std::string(class_name(c)).c_str());
    }
    for (const char* name : {"homogeneous_128", "homogeneous_256"}) {
        const Generated g = generate(corpus_by_name(name));
        const PointClass c = classify_point(g.u, Vec{}, cfg);
        const Convergence conv = blowup_converge(g.u, Vec{}, cfg);
        const Tolerances tol = resolve_tolerances(cfg, g.u);
        double worst = 0;
        std::size_t over = 0;
        const auto& seq = conv.sequence;
        for (std::size_t k = 0; k < seq.gaps.size(); ++k) {
            const double bound = gap_tolerance(tol, g.u.spacing(), seq.radii[k + 1]);
            worst = std::max(worst, seq.gaps[k] / bound);
            if (seq.gaps[k] > bound) ++over;
        }
        pass = pass && holds<SingularNonJump>(c) && over == 0;
        detail += fmt("%s origin: %s, %zu gaps, worst gap / tolerance %.3f; ", name,
                      std::string(class_name(c)).c_str(), seq.gaps.size(), worst);
    }
    return {pass, detail};
}

Outcome extended_values() {
    const fs::path dir = scratch_dir();
    std::string detail;
    bool pass = true;
    for (const char* name : {"extended_disk_128", "extended_disk_256"}) {
        if (run_tool({"gen", name, "--out", dir.string()}) != 0 ||
            run_tool({"classify", (dir / (std::string(name) + ".gf1.json")).string(), "--extended", "--out",
                      dir.string(), "--workers", std::to_string(default_workers())}) != 0) {
            return {false, std::string("CLI failed on ") + name};
        }
        const nlohmann::json doc = read_json(dir / (std::string(name) + ".classify.json"));
        const nlohmann::json truth = read_json(dir / (std::string(name) + ".truth.json"));
        std::set<std::size_t> jumps;
        double worst = 0;
        for (const auto& rec : doc.at("points")) {
            if (rec.at("class") != "jump") continue;
            jumps.insert(rec.at("index").get<std::size_t>());
            worst = std::max({worst, std::abs(rec.at("a").get<double>() - std::numbers::pi / 2),
                              std::abs(rec.at("b").get<double>())});
        }
        std::size_t band = 0, missed = 0;
        const auto& labels = truth.at("labels");
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i].get<int>() != static_cast<int>(Truth::Jump)) continue;
            ++band;
            if (!jumps.count(i)) ++missed;
        }
        pass = pass && band > 0 && missed == 0 && worst <= 0.02;
        detail += fmt("%s: %zu of %zu circle points Jump, worst |(a,b)-(pi/2,0)| %.4f; ", name, band - missed, band,
                      worst);
    }
    fs::remove_all(dir);

    double worst_agree = 2.0;
    std::string worst_name;
    for (const CorpusSpec& spec : list_corpus()) {
        const Generated g = generate(spec);
        if (!g.truth.bounded) continue;
        const auto plain = classify_grid(g.u, ClassifyConfig{}, default_workers());
        const auto mapped = classify_grid_extended(g.u, ClassifyConfig{}, default_workers());
        std::size_t agree = 0;
        for (std::size_t i = 0; i < plain.size(); ++i) {
            agree += holds<ApproxContinuous>(plain[i].cls) == holds<ApproxContinuous>(mapped[i].cls) ? 1 : 0;
        }
        const double frac = static_cast<double>(agree) / plain.size();
        if (frac < worst_agree) {
            worst_agree = frac;
            worst_name = spec.name();
        }
    }
    pass = pass && worst_agree >= 0.99;
    detail += fmt("AC agreement of u and arctan(u): worst %.4f (%s)", worst_agree, worst_name.c_str());
    return {pass, detail};
}

Outcome cone_geometry() {
    const ConeSpec c = cone_from_params(Ball{{0, 0.5, 0}, 0.25}, 0.5, 0.25, 2);
    const double rho_prime = std::sqrt(2.0) / 16.0;
    const double eps = 0.25 - rho_prime;
    const double lipschitz = std::sqrt(0.25 - eps * eps) / eps;
    const double e1 = std::abs(c.rho_prime - rho_prime);
    const double e2 = std::abs(c.eps - eps);
    const double e3 = std::abs(c.lipschitz - lipschitz);
    const double e4 = std::abs(c.lipschitz - 2.9275);
    const bool pass = e1 <= 1e-9 && e2 <= 1e-9 && e3 <= 1e-9 && e4 <= 5e-4;
    return {pass, fmt("rho' %.12f (err %.1e), eps %.12f (err %.1e), L %.12f (err %.1e; %.1e from 2.9275)",
                      c.rho_prime, e1, c.eps, e2, c.lipschitz, e3, e4)};
}

Outcome planted_failures() {
    const fs::path dir = scratch_dir();
    nlohmann::json doc = {{"schema", kSchemaVersion},
                          {"dim", 2},
                          {"spacing", 0.01},
                          {"params", {{"delta", 0.2}, {"tau", 0.5}, {"r0", 0.25},
                                      {"ball", {{"center", {0.0, 0.5}}, {"radius", 0.25}}}}},
                          {"points", {{0.0, 0.0}, {0.0, 0.1}}}};
    write_json(dir / "axis_pair.eset.json", doc);
    const int verify_code = run_tool({"verify", (dir / "axis_pair.eset.json").string(), "--out", dir.string()});
    const nlohmann::json report = read_json(dir / "axis_pair.violations.json");
    const std::size_t count = report.at("count").get<std::size_t>();

    doc["points"] = {{0.01, 0.01}, {0.01, 0.03}};
    write_json(dir / "cell_pair.eset.json", doc);
    const int cover_code = run_tool({"cover", (dir / "cell_pair.eset.json").string(), "--out", dir.string()});
    const nlohmann::json cover = read_json(dir / "cell_pair.cover.json");
    bool infinite = false;
    std::size_t failed = 0;
    for (const auto& cell : cover.at("cells")) {
        if (!cell.at("pass").get<bool>()) ++failed;
        if (cell.at("infinite_slope").get<bool>()) infinite = true;
    }
    fs::remove_all(dir);
    const bool pass = count == 1 && verify_code == kExitVerificationFailed && failed == 1 && infinite &&
                      cover.at("cells").size() == 1;
    return {pass, fmt("verify: %zu violation, exit %d; cover: %zu failed cell, infinite slope flag %s, exit %d",
                      count, verify_code, failed, infinite ? "set" : "unset", cover_code)};
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> only;
    std::vector<int> expect_fail;
    CLI::App app{"Acceptance criteria runner", "acceptance"};
    app.add_option("--only", only, "criteria to run")->delimiter(',');
    app.add_option("--expect-fail", expect_fail, "criteria known to fail")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"half-plane recovery", halfplane_recovery},
        {"disk recovery", disk_recovery},
        {"cone property", cone_property},
        {"Lipschitz cover", lipschitz_cover},
        {"oscillation algebra", oscillation_algebra},
        {"analytic oscillation values", analytic_oscillation},
        {"non-convergence and non-jump singularity", nonconvergence_and_homogeneous},
        {"extended values", extended_values},
        {"cone geometry unit values", cone_geometry},
        {"planted failure detection", planted_failures},
    };
    std::set<int> failed;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int id = static_cast<int>(k) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) failed.insert(id);
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << criteria[k].first << "): "
                  << o.detail << fmt(" [%.1f s]", seconds_since(t0)) << std::endl;
    }
    std::set<int> expected;
    for (int id : expect_fail) {
        if (only.empty() || std::find(only.begin(), only.end(), id) != only.end()) expected.insert(id);
    }
    if (failed != expected) {
        std::cout << "failing criteria differ from the expected set" << std::endl;
        return 1;
    }
    return 0;
}
