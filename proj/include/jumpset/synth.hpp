#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "jumpset/grid.hpp"

namespace jumpset {

/// Test function with analytically known singular and jump sets. All kinds
/// live on [-1,1]^dim sampled at cell centres (h = 2 / resolution).
///
/// kinds and their parameters (missing entries take the defaults below):
///   halfplane      a=1 b=0 angle=0 offset=0      a where nu.y > offset, nu = (cos, sin)
///   disk           radius=0.3 inside=2 outside=0
///   polygon        sides=5 radius=0.5 rotation=0 inside=1 outside=0
///   voronoi        sites=6                       site values k/(sites-1), permuted
///   smooth         width=0.8                     exp(-|y|^2 / width^2)
///   homogeneous                                  |y_1| / |y|
///   logspiral                                    sin(log |y|)
///   checkerboard   period=0.25
///   extended_disk  radius=0.3                    +inf inside, 0 outside
/// Every kind accepts noise=0 (uniform amplitude added to finite values).
struct CorpusSpec {
    std::string kind;
    int dim = 2;
    int resolution = 128;
    std::uint64_t seed = 1;
    std::map<std::string, double> params;

    std::string name() const;
    double param(const std::string& key) const;  // value or the kind's default
    double spacing() const { return 2.0 / resolution; }
};

nlohmann::json to_json(const CorpusSpec& spec);
CorpusSpec corpus_spec_from_json(const nlohmann::json& j);

enum class Truth : std::uint8_t { ApproxContinuous, Jump, Singular, NonConvergent, Any };

const char* truth_name(Truth t);

/// Expected jump data at a point; either orientation (a,b,nu) or
/// (b,a,-nu) is acceptable.
struct JumpTruth {
    double a = 0.0;
    double b = 0.0;
    Vec nu{};
};

/// Per-cell expectations. Cells within h/2 of an interface (and away from
/// junctions and corners) are Jump; cells farther than 3h from every
/// singular feature are ApproxContinuous; everything in between is Any.
struct GroundTruth {
    std::string interface;          // human-readable description
    std::vector<Truth> labels;
    std::vector<double> distance;   // distance to the nearest singular feature
    std::vector<JumpTruth> jumps;   // meaningful where labels[i] == Jump
    std::vector<Vec> singular_points;
    bool bounded = true;            // false when the function takes +-inf
};

struct Generated {
    GridFunction u;
    GroundTruth truth;
};

/// The analytic function of `spec` evaluated at p (no noise).
double evaluate(const CorpusSpec& spec, const Vec& p);

/// Throws Error(InvalidSpec) for unknown kinds, bad parameters or
/// dimensions the kind does not support.
Generated generate(const CorpusSpec& spec);

/// One spec per kind at resolutions 128 and 256.
std::vector<CorpusSpec> list_corpus();

/// Spec by corpus name, e.g. "disk_256". Throws InvalidSpec.
CorpusSpec corpus_by_name(const std::string& name);

}  // namespace jumpset
