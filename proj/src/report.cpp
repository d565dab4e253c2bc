#include "jumpset/report.hpp"

#include <cmath>
#include <fstream>

#include "jumpset/extended.hpp"

namespace jumpset {

using nlohmann::json;

void RunConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw Error(Errc::InvalidArgument, std::string(name) + " must be positive");
    };
    positive(tol_cauchy, "tol_cauchy");
    positive(tol_const, "tol_const");
    positive(tol_jump, "tol_jump");
    positive(sep_min, "sep_min");
    positive(r_min_cells, "r_min");
    if (!(guard_cells >= 0.0)) throw Error(Errc::InvalidArgument, "guard must be non-negative");
    if (!(sigma > 0.0 && sigma < 1.0)) throw Error(Errc::InvalidArgument, "sigma must lie in (0, 1)");
    if (!(tau > 0.0 && tau < 1.0)) throw Error(Errc::InvalidArgument, "tau must lie in (0, 1)");
    if (depth < 1 || depth > 20) throw Error(Errc::InvalidArgument, "depth must lie in [1, 20]");
    if (workers < 1) throw Error(Errc::InvalidArgument, "workers must be at least 1");
    if (r0.empty()) throw Error(Errc::InvalidArgument, "at least one r0 is required");
    for (double r : r0) positive(r, "r0");
    if (deltas.empty()) throw Error(Errc::InvalidArgument, "at least one delta is required");
    for (double d : deltas) positive(d, "delta");
}

ClassifyConfig RunConfig::classify_config() const {
    ClassifyConfig cfg;
    cfg.tol_cauchy = tol_cauchy;
    cfg.tol_const = tol_const;
    cfg.tol_jump = tol_jump;
    cfg.sep_min = sep_min;
    cfg.sigma = sigma;
    cfg.min_radius_cells = r_min_cells;
    return cfg;
}

json to_json(const RunConfig& run) {
    return {{"command", run.command},   {"inputs", run.inputs},  {"tol_cauchy", run.tol_cauchy},
            {"tol_const", run.tol_const}, {"tol_jump", run.tol_jump}, {"sep_min", run.sep_min},
            {"sigma", run.sigma},       {"r_min_cells", run.r_min_cells}, {"r0", run.r0},
            {"depth", run.depth},       {"deltas", run.deltas},  {"tau", run.tau},
            {"guard_cells", run.guard_cells}, {"extended", run.extended}};
}

json to_json(const Vec& v, int dim) {
    json out = json::array();
    for (int k = 0; k < dim; ++k) out.push_back(v[k]);
    return out;
}

json to_json(const Ball& ball, int dim) { return {{"center", to_json(ball.center, dim)}, {"radius", ball.radius}}; }

json to_json(const ConeSpec& cone) {
    return {{"dim", cone.dim},
            {"z0", to_json(cone.z0, cone.dim)},
            {"axis", to_json(cone.axis, cone.dim)},
            {"z0_norm", cone.z0_norm},
            {"rho", cone.rho},
            {"rho_prime", cone.rho_prime},
            {"eps", cone.eps},
            {"sin_half_aperture", cone.sin_half_aperture},
            {"lipschitz", cone.lipschitz},
            {"range", cone.range}};
}

json to_json(const GroundTruth& truth, const GridFunction& u) {
    json labels = json::array();
    json jumps = json::array();
    for (std::size_t i = 0; i < truth.labels.size(); ++i) {
        labels.push_back(static_cast<int>(truth.labels[i]));
        if (truth.labels[i] == Truth::Jump) {
            const JumpTruth& j = truth.jumps[i];
            jumps.push_back({{"index", i}, {"a", j.a}, {"b", j.b}, {"nu", to_json(j.nu, u.dim())}});
        }
    }
    json names = json::array();
    for (Truth t : {Truth::ApproxContinuous, Truth::Jump, Truth::Singular, Truth::NonConvergent, Truth::Any}) {
        names.push_back(truth_name(t));
    }
    json points = json::array();
    for (const Vec& p : truth.singular_points) points.push_back(to_json(p, u.dim()));
    return {{"schema", kSchemaVersion}, {"interface", truth.interface}, {"bounded", truth.bounded},
            {"label_names", names},     {"labels", labels},             {"jumps", jumps},
            {"singular_points", points}};
}

namespace {

json grid_json(const GridFunction& u) {
    return {{"shape", u.shape()}, {"spacing", u.spacing()}, {"origin", to_json(u.origin(), u.dim())}};
}

json params_json(const ESetParams& p, int dim) {
    return {{"delta", p.delta}, {"tau", p.tau}, {"ball", to_json(p.ball, dim)}, {"r0", p.r0}, {"radii", p.radii}};
}

Vec vec_from_json(const json& j, int dim) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim) throw FormatError(0, "vector has the wrong length");
    Vec v{};
    for (int k = 0; k < dim; ++k) v[k] = j.at(k).get<double>();
    return v;
}

json point_record(const GridFunction& u, std::size_t i, const PointReport& r, bool extended) {
    json rec = {{"index", i},
                {"x", to_json(u.cell_center(i), u.dim())},
                {"class", std::string(class_name(r.cls))},
                {"limit_radius", r.limit_radius},
                {"limit_osc", r.limit_osc}};
    if (const auto* j = std::get_if<Jump>(&r.cls)) {
        rec["a"] = j->fit.a;
        rec["b"] = j->fit.b;
        rec["nu"] = to_json(j->fit.nu, u.dim());
        rec["residual"] = j->fit.residual;
        rec["fit_radius"] = r.fit_radius;
        if (extended) {
            const double a = phi_inverse(j->fit.a);
            const double b = phi_inverse(j->fit.b);
            if (std::isfinite(a)) rec["a_value"] = a;
            if (std::isfinite(b)) rec["b_value"] = b;
        }
    } else if (const auto* s = std::get_if<SingularNonJump>(&r.cls)) {
        rec["osc"] = s->osc_of_limit;
    }
    return rec;
}

}  // namespace

json classification_json(const GridFunction& u, const std::vector<PointReport>& reports, const RunConfig& run) {
    if (reports.size() != u.size()) throw Error(Errc::InvalidArgument, "one report per grid point is required");
    json counts = {{"approx_continuous", 0}, {"jump", 0}, {"singular_non_jump", 0}, {"non_convergent", 0},
                   {"insufficient", 0}};
    json points = json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const PointReport& r = reports[i];
        json& slot = counts[std::string(class_name(r.cls))];
        slot = slot.get<long long>() + 1;
        if (holds<ApproxContinuous>(r.cls) || holds<Insufficient>(r.cls)) continue;
        points.push_back(point_record(u, i, r, run.extended));
    }
    return {{"schema", kSchemaVersion}, {"config", to_json(run)},   {"grid", grid_json(u)},
            {"values", run.extended ? "phi" : "raw"}, {"counts", counts}, {"points", points}};
}

json eset_json(const ESet& set, const RunConfig& run) {
    json points = json::array();
    for (const Vec& p : set.points) points.push_back(to_json(p, set.dim));
    return {{"schema", kSchemaVersion},
            {"config", to_json(run)},
            {"params", params_json(set.params, set.dim)},
            {"dim", set.dim},
            {"spacing", set.spacing},
            {"count", set.points.size()},
            {"insufficient", set.insufficient},
            {"points", points},
            {"indices", set.indices}};
}

ESet eset_from_json(const json& j) {
    try {
        ESet set;
        set.dim = j.at("dim").get<int>();
        if (set.dim < 1 || set.dim > kMaxDim) throw FormatError(0, "dim must be 1, 2 or 3");
        set.spacing = j.value("spacing", 0.0);
        const json& p = j.at("params");
        set.params.delta = p.at("delta").get<double>();
        set.params.tau = p.at("tau").get<double>();
        set.params.r0 = p.at("r0").get<double>();
        set.params.ball.center = vec_from_json(p.at("ball").at("center"), set.dim);
        set.params.ball.radius = p.at("ball").at("radius").get<double>();
        if (p.contains("radii")) set.params.radii = p.at("radii").get<std::vector<double>>();
        for (const json& q : j.at("points")) set.points.push_back(vec_from_json(q, set.dim));
        if (j.contains("indices")) set.indices = j.at("indices").get<std::vector<std::size_t>>();
        set.insufficient = j.value("insufficient", std::size_t{0});
        return set;
    } catch (const json::exception& e) {
        throw FormatError(0, std::string("malformed E-set document: ") + e.what());
    }
}

json violations_json(const ESet& set, const ConeSpec& cone, double guard, const std::vector<ConePair>& pairs,
                     const RunConfig& run) {
    json list = json::array();
    for (const ConePair& pair : pairs) {
        list.push_back({{"i", pair.i},
                        {"j", pair.j},
                        {"x", to_json(set.points[pair.i], set.dim)},
                        {"y", to_json(set.points[pair.j], set.dim)}});
    }
    return {{"schema", kSchemaVersion},
            {"config", to_json(run)},
            {"params", params_json(set.params, set.dim)},
            {"cone", to_json(cone)},
            {"guard", guard},
            {"points", set.points.size()},
            {"count", pairs.size()},
            {"violations", list}};
}

json cover_json(const ESet& set, const CoverReport& report, const RunConfig& run) {
    json cells = json::array();
    std::size_t failed = 0;
    for (const CoverCell& c : report.cells) {
        if (!c.pass) ++failed;
        std::vector<long long> id(c.id.begin(), c.id.begin() + report.cone.dim);
        cells.push_back({{"id", id},
                         {"members", c.members},
                         {"pass", c.pass},
                         {"infinite_slope", c.infinite_slope},
                         {"worst_slope", std::isinf(c.worst_slope) ? json(nullptr) : json(c.worst_slope)}});
    }
    const double worst = report.worst_slope();
    return {{"schema", kSchemaVersion},
            {"config", to_json(run)},
            {"params", params_json(set.params, set.dim)},
            {"cone", to_json(report.cone)},
            {"cell_side", report.cell_side},
            {"all_pass", report.all_pass()},
            {"failed_cells", failed},
            {"worst_slope", std::isinf(worst) ? json(nullptr) : json(worst)},
            {"cells", cells}};
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::InvalidArgument, "cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw Error(Errc::InvalidArgument, "write failed for " + path.string());
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(0, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError(e.byte, std::string("invalid JSON: ") + e.what());
    }
}

void write_class_map(const std::filesystem::path& path, const GridFunction& u, const std::vector<PointReport>& reports) {
    if (reports.size() != u.size()) throw Error(Errc::InvalidArgument, "one report per grid point is required");
    const auto& shape = u.shape();
    const std::size_t rows = shape[0];
    const std::size_t cols = u.size() / rows;
    std::vector<unsigned char> pixels(u.size());
    if (u.dim() < 3) {
        for (std::size_t i = 0; i < u.size(); ++i) pixels[i] = static_cast<unsigned char>(class_code(reports[i].cls));
    } else {
        const std::size_t n1 = shape[1];
        const std::size_t n2 = shape[2];
        for (std::size_t i0 = 0; i0 < shape[0]; ++i0) {
            for (std::size_t i1 = 0; i1 < n1; ++i1) {
                for (std::size_t i2 = 0; i2 < n2; ++i2) {
                    const std::size_t flat = (i0 * n1 + i1) * n2 + i2;
                    pixels[i0 * cols + i2 * n1 + i1] = static_cast<unsigned char>(class_code(reports[flat].cls));
                }
            }
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::InvalidArgument, "cannot write " + path.string());
    out << "P5\n" << cols << ' ' << rows << "\n255\n";
    out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
}

}  // namespace jumpset
