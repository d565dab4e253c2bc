#include "jumpset/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace jumpset {
namespace {

using Params = std::map<std::string, double>;

const std::map<std::string, Params>& defaults() {
    static const std::map<std::string, Params> table = {
        {"halfplane", {{"a", 1.0}, {"b", 0.0}, {"angle", 0.0}, {"offset", 0.0}, {"noise", 0.0}}},
        {"disk", {{"radius", 0.3}, {"inside", 2.0}, {"outside", 0.0}, {"noise", 0.0}}},
        {"polygon", {{"sides", 5.0}, {"radius", 0.5}, {"rotation", 0.0}, {"inside", 1.0}, {"outside", 0.0}, {"noise", 0.0}}},
        {"voronoi", {{"sites", 6.0}, {"noise", 0.0}}},
        {"smooth", {{"width", 0.8}, {"noise", 0.0}}},
        {"homogeneous", {{"noise", 0.0}}},
        {"logspiral", {{"noise", 0.0}}},
        {"checkerboard", {{"period", 0.25}, {"noise", 0.0}}},
        {"extended_disk", {{"radius", 0.3}}},
    };
    return table;
}

[[noreturn]] void invalid(const std::string& what) { throw Error(Errc::InvalidSpec, what); }

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Point singularities are surrounded by a wider don't-care disc than
/// interfaces: a blowup centred near them only turns constant at radii
/// well below the distance.
constexpr double kPointBandCells = 16.0;
constexpr double kInterfaceBandCells = 3.0;

struct Feature {
    double interface = std::numeric_limits<double>::infinity();  // distance to a jump interface
    double special = std::numeric_limits<double>::infinity();    // distance to corners/junctions
    double point = std::numeric_limits<double>::infinity();      // distance to a point singularity
    JumpTruth jump;
};

class Model {
public:
    explicit Model(const CorpusSpec& spec) : spec_(spec), kind_(spec.kind) {
        const auto it = defaults().find(kind_);
        if (it == defaults().end()) invalid("unknown corpus kind '" + kind_ + "'");
        for (const auto& [key, value] : spec.params) {
            if (!it->second.contains(key)) invalid("kind '" + kind_ + "' has no parameter '" + key + "'");
            if (!std::isfinite(value)) invalid("parameter '" + key + "' must be finite");
        }
        if (spec.dim < 1 || spec.dim > kMaxDim) invalid("dim must be 1, 2 or 3");
        if (spec.resolution < 8) invalid("resolution must be at least 8");
        if ((kind_ == "polygon" || kind_ == "voronoi") && spec.dim != 2) invalid(kind_ + " is two-dimensional");
        if (kind_ == "disk" || kind_ == "extended_disk") {
            const double r = spec.param("radius");
            if (!(r > 0.0 && r < 1.0)) invalid("radius must lie in (0, 1)");
        }
        if (kind_ == "polygon") {
            const double sides = spec.param("sides");
            if (sides < 3.0 || sides != std::floor(sides)) invalid("sides must be an integer >= 3");
            const double r = spec.param("radius");
            if (!(r > 0.0 && r < 1.0)) invalid("radius must lie in (0, 1)");
            const int s = static_cast<int>(sides);
            for (int k = 0; k < s; ++k) {
                const double t = spec.param("rotation") + 2.0 * std::numbers::pi * k / s;
                vertices_.push_back({r * std::cos(t), r * std::sin(t), 0.0});
            }
        }
        if (kind_ == "voronoi") {
            const double sites = spec.param("sites");
            if (sites < 2.0 || sites != std::floor(sites)) invalid("sites must be an integer >= 2");
            const int s = static_cast<int>(sites);
            std::mt19937_64 rng(spec.seed);
            for (int k = 0; k < s; ++k) {
                const double x = -0.8 + 1.6 * uniform01(rng);
                const double y = -0.8 + 1.6 * uniform01(rng);
                sites_.push_back({x, y, 0.0});
            }
            site_values_.resize(s);
            for (int k = 0; k < s; ++k) site_values_[k] = static_cast<double>(k) / (s - 1);
            for (int k = s - 1; k > 0; --k) {
                const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(k + 1));
                std::swap(site_values_[k], site_values_[j]);
            }
        }
        if (kind_ == "checkerboard" && !(spec.param("period") > 0.0)) invalid("period must be positive");
        if (kind_ == "smooth" && !(spec.param("width") > 0.0)) invalid("width must be positive");
        if (kind_ == "halfplane") {
            const double t = spec.param("angle");
            nu_ = {std::cos(t), std::sin(t), 0.0};
            if (spec.dim == 1) nu_ = {nu_[0] >= 0.0 ? 1.0 : -1.0, 0.0, 0.0};
        }
    }

    double value(const Vec& p) const {
        if (kind_ == "halfplane") return dot(nu_, p) > spec_.param("offset") ? spec_.param("a") : spec_.param("b");
        if (kind_ == "disk") return norm(p) < spec_.param("radius") ? spec_.param("inside") : spec_.param("outside");
        if (kind_ == "extended_disk") {
            return norm(p) < spec_.param("radius") ? std::numeric_limits<double>::infinity() : 0.0;
        }
        if (kind_ == "polygon") return inside_polygon(p) ? spec_.param("inside") : spec_.param("outside");
        if (kind_ == "voronoi") return site_values_[nearest_site(p)];
        if (kind_ == "smooth") {
            const double w = spec_.param("width");
            return std::exp(-dot(p, p) / (w * w));
        }
        if (kind_ == "homogeneous") {
            const double r = norm(p);
            return r > 0.0 ? std::abs(p[0]) / r : 0.0;
        }
        if (kind_ == "logspiral") {
            const double r = norm(p);
            return r > 0.0 ? std::sin(std::log(r)) : 0.0;
        }
        // checkerboard
        const double period = spec_.param("period");
        long long sum = 0;
        for (int k = 0; k < spec_.dim; ++k) sum += static_cast<long long>(std::floor(p[k] / period));
        return (sum % 2 + 2) % 2 == 0 ? 0.0 : 1.0;
    }

    Feature feature(const Vec& p) const {
        Feature f;
        if (kind_ == "halfplane") {
            f.interface = std::abs(dot(nu_, p) - spec_.param("offset"));
            f.jump = {spec_.param("a"), spec_.param("b"), nu_};
        } else if (kind_ == "disk" || kind_ == "extended_disk") {
            const double r = norm(p);
            const double radius = spec_.param("radius");
            f.interface = std::abs(r - radius);
            const Vec inward = r > 0.0 ? (-1.0 / r) * p : Vec{-1.0, 0.0, 0.0};
            const double inside = kind_ == "disk" ? spec_.param("inside") : std::numeric_limits<double>::infinity();
            const double outside = kind_ == "disk" ? spec_.param("outside") : 0.0;
            f.jump = {inside, outside, inward};
        } else if (kind_ == "polygon") {
            polygon_feature(p, f);
        } else if (kind_ == "voronoi") {
            voronoi_feature(p, f);
        } else if (kind_ == "homogeneous" || kind_ == "logspiral") {
            f.point = norm(p);
        } else if (kind_ == "checkerboard") {
            checker_feature(p, f);
        }
        return f;
    }

    std::string describe() const {
        if (kind_ == "halfplane") return "hyperplane nu.y = offset";
        if (kind_ == "disk" || kind_ == "extended_disk") return "sphere |y| = " + std::to_string(spec_.param("radius"));
        if (kind_ == "polygon") return "boundary of a regular polygon";
        if (kind_ == "voronoi") return "Voronoi cell boundaries";
        if (kind_ == "homogeneous") return "singular point at the origin (not a jump)";
        if (kind_ == "logspiral") return "non-convergent blowup at the origin";
        if (kind_ == "checkerboard") return "full edge lattice of the checkerboard";
        return "none";
    }

    bool has_singular_point() const { return kind_ == "homogeneous" || kind_ == "logspiral"; }
    bool non_convergent_point() const { return kind_ == "logspiral"; }
    bool bounded() const { return kind_ != "extended_disk"; }

private:
    bool inside_polygon(const Vec& p) const {
        const std::size_t s = vertices_.size();
        for (std::size_t k = 0; k < s; ++k) {
            const Vec& a = vertices_[k];
            const Vec& b = vertices_[(k + 1) % s];
            const double cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
            if (cross <= 0.0) return false;
        }
        return true;
    }

    void polygon_feature(const Vec& p, Feature& f) const {
        const std::size_t s = vertices_.size();
        for (std::size_t k = 0; k < s; ++k) {
            const Vec& a = vertices_[k];
            const Vec& b = vertices_[(k + 1) % s];
            const Vec e = b - a;
            const double t = std::clamp(dot(p - a, e) / dot(e, e), 0.0, 1.0);
            const double d = norm(p - (a + t * e));
            if (d < f.interface) {
                f.interface = d;
                const Vec inward = (1.0 / norm(e)) * Vec{-e[1], e[0], 0.0};
                f.jump = {spec_.param("inside"), spec_.param("outside"), inward};
            }
            f.special = std::min(f.special, norm(p - a));
        }
    }

    std::size_t nearest_site(const Vec& p) const {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < sites_.size(); ++k) {
            const Vec d = p - sites_[k];
            const double dd = dot(d, d);
            if (dd < best_d) {
                best_d = dd;
                best = k;
            }
        }
        return best;
    }

    void voronoi_feature(const Vec& p, Feature& f) const {
        const std::size_t i = nearest_site(p);
        double second = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < sites_.size(); ++j) {
            if (j == i) continue;
            const Vec pi = p - sites_[i];
            const Vec pj = p - sites_[j];
            const double d = (dot(pj, pj) - dot(pi, pi)) / (2.0 * norm(sites_[j] - sites_[i]));
            if (d < f.interface) {
                second = f.interface;
                f.interface = d;
                const Vec dir = sites_[i] - sites_[j];
                f.jump = {site_values_[i], site_values_[j], (1.0 / norm(dir)) * dir};
            } else {
                second = std::min(second, d);
            }
        }
        f.special = second;
    }

    void checker_feature(const Vec& p, Feature& f) const {
        const double period = spec_.param("period");
        double second = std::numeric_limits<double>::infinity();
        for (int k = 0; k < spec_.dim; ++k) {
            const double line = period * std::round(p[k] / period);
            if (std::abs(line) >= 1.0) continue;  // domain boundary, not an interface
            const double d = std::abs(p[k] - line);
            if (d < f.interface) {
                second = f.interface;
                f.interface = d;
                Vec nu{};
                nu[k] = 1.0;
                Vec above = p;
                Vec below = p;
                above[k] = line + 0.5 * period;
                below[k] = line - 0.5 * period;
                f.jump = {value(above), value(below), nu};
            } else {
                second = std::min(second, d);
            }
        }
        f.special = second;
    }

    const CorpusSpec& spec_;
    std::string kind_;
    Vec nu_{1.0, 0.0, 0.0};
    std::vector<Vec> vertices_;
    std::vector<Vec> sites_;
    std::vector<double> site_values_;
};

}  // namespace

std::string CorpusSpec::name() const {
    std::string n = kind + "_" + std::to_string(resolution);
    if (dim != 2) n += "_" + std::to_string(dim) + "d";
    return n;
}

double CorpusSpec::param(const std::string& key) const {
    if (const auto it = params.find(key); it != params.end()) return it->second;
    const auto kind_it = defaults().find(kind);
    if (kind_it == defaults().end()) invalid("unknown corpus kind '" + kind + "'");
    const auto def = kind_it->second.find(key);
    if (def == kind_it->second.end()) invalid("kind '" + kind + "' has no parameter '" + key + "'");
    return def->second;
}

nlohmann::json to_json(const CorpusSpec& spec) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [key, value] : spec.params) params[key] = value;
    return {{"kind", spec.kind}, {"dim", spec.dim}, {"resolution", spec.resolution}, {"seed", spec.seed},
            {"params", params}};
}

CorpusSpec corpus_spec_from_json(const nlohmann::json& j) {
    try {
        CorpusSpec spec;
        spec.kind = j.at("kind").get<std::string>();
        spec.dim = j.value("dim", 2);
        spec.resolution = j.value("resolution", 128);
        spec.seed = j.value("seed", std::uint64_t{1});
        if (j.contains("params")) {
            for (const auto& [key, value] : j.at("params").items()) spec.params[key] = value.get<double>();
        }
        return spec;
    } catch (const nlohmann::json::exception& e) {
        invalid(std::string("malformed corpus spec: ") + e.what());
    }
}

const char* truth_name(Truth t) {
    switch (t) {
        case Truth::ApproxContinuous: return "approx_continuous";
        case Truth::Jump: return "jump";
        case Truth::Singular: return "singular";
        case Truth::NonConvergent: return "non_convergent";
        case Truth::Any: return "any";
    }
    return "any";
}

double evaluate(const CorpusSpec& spec, const Vec& p) { return Model(spec).value(p); }

Generated generate(const CorpusSpec& spec) {
    const Model model(spec);
    const double h = spec.spacing();
    const auto n = static_cast<std::size_t>(spec.resolution);
    std::vector<std::size_t> shape(static_cast<std::size_t>(spec.dim), n);
    Vec origin{};
    for (int k = 0; k < spec.dim; ++k) origin[k] = -1.0 + 0.5 * h;

    std::size_t total = 1;
    for (std::size_t e : shape) total *= e;

    std::vector<double> values(total);
    GroundTruth truth;
    truth.interface = model.describe();
    truth.bounded = model.bounded();
    truth.labels.resize(total);
    truth.distance.resize(total);
    truth.jumps.resize(total);
    if (model.has_singular_point()) truth.singular_points.push_back(Vec{});

    const double noise = spec.kind == "extended_disk" ? 0.0 : spec.param("noise");
    std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);

    for (std::size_t flat = 0; flat < total; ++flat) {
        Vec p{};
        std::size_t rest = flat;
        for (int k = spec.dim - 1; k >= 0; --k) {
            p[k] = origin[k] + h * static_cast<double>(rest % n);
            rest /= n;
        }
        double v = model.value(p);
        if (noise > 0.0 && std::isfinite(v)) v += noise * (2.0 * uniform01(rng) - 1.0);
        values[flat] = v;

        const Feature f = model.feature(p);
        const double nearest = std::min({f.interface, f.special, f.point});
        truth.distance[flat] = nearest;
        Truth label = Truth::Any;
        if (f.point == 0.0) {
            label = model.non_convergent_point() ? Truth::NonConvergent : Truth::Singular;
        } else if (f.point <= kPointBandCells * h) {
            label = Truth::Any;
        } else if (f.interface <= 0.5 * h * (1.0 + 1e-9) && f.special > kInterfaceBandCells * h) {
            label = Truth::Jump;
            truth.jumps[flat] = f.jump;
        } else if (nearest > kInterfaceBandCells * h) {
            label = Truth::ApproxContinuous;
        }
        truth.labels[flat] = label;
    }
    return {GridFunction(std::move(shape), h, origin, std::move(values)), std::move(truth)};
}

std::vector<CorpusSpec> list_corpus() {
    std::vector<CorpusSpec> out;
    for (const char* kind : {"halfplane", "disk", "polygon", "voronoi", "smooth", "homogeneous", "logspiral",
                             "checkerboard", "extended_disk"}) {
        for (int resolution : {128, 256}) {
            CorpusSpec spec;
            spec.kind = kind;
            spec.resolution = resolution;
            out.push_back(spec);
        }
    }
    return out;
}

CorpusSpec corpus_by_name(const std::string& name) {
    for (const CorpusSpec& spec : list_corpus()) {
        if (spec.name() == name) return spec;
    }
    const auto cut = name.rfind('_');
    if (cut == std::string::npos) invalid("unknown corpus name '" + name + "'");
    CorpusSpec spec;
    spec.kind = name.substr(0, cut);
    try {
        spec.resolution = std::stoi(name.substr(cut + 1));
    } catch (const std::exception&) {
        invalid("unknown corpus name '" + name + "'");
    }
    if (!defaults().contains(spec.kind)) invalid("unknown corpus kind '" + spec.kind + "'");
    return spec;
}

}  // namespace jumpset
