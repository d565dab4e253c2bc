#include "jumpset/cli.hpp"

#include <filesystem>
#include <sstream>

#include <CLI11.hpp>

#include "jumpset/extended.hpp"
#include "jumpset/gf1.hpp"
#include "jumpset/report.hpp"

namespace jumpset {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string stem_of(const fs::path& path) {
    std::string name = path.filename().string();
    for (const char* suffix : {".gf1.json", ".eset.json", ".json"}) {
        const std::string s(suffix);
        if (name.size() > s.size() && name.ends_with(s)) return name.substr(0, name.size() - s.size());
    }
    return path.stem().string();
}

fs::path out_dir(const RunConfig& run) {
    fs::path dir(run.out);
    fs::create_directories(dir);
    return dir;
}

GridFunction load_input(const RunConfig& run) {
    GridFunction u = read_grid(run.inputs.front());
    return run.extended ? phi_apply(u) : u;
}

std::vector<PointReport> classify_input(const GridFunction& w, const RunConfig& run) {
    ClassifyConfig cfg = run.classify_config();
    if (run.extended) cfg = extended_config(cfg, w);
    return classify_grid(w, cfg, run.workers);
}

int cmd_gen(const RunConfig& run, std::ostream& out) {
    const fs::path dir = out_dir(run);
    for (const std::string& item : run.inputs) {
        CorpusSpec spec;
        if (item.ends_with(".json")) {
            spec = corpus_spec_from_json(read_json(item));
        } else if (item == "all") {
            for (const CorpusSpec& s : list_corpus()) {
                const Generated g = generate(s);
                write_grid(g.u, dir / (s.name() + ".gf1.json"));
                write_json(dir / (s.name() + ".truth.json"), to_json(g.truth, g.u));
                out << s.name() << '\n';
            }
            continue;
        } else {
            spec = corpus_by_name(item);
        }
        const Generated g = generate(spec);
        write_grid(g.u, dir / (spec.name() + ".gf1.json"));
        json truth = to_json(g.truth, g.u);
        truth["spec"] = to_json(spec);
        write_json(dir / (spec.name() + ".truth.json"), truth);
        out << spec.name() << '\n';
    }
    return kExitOk;
}

int cmd_classify(const RunConfig& run, std::ostream& out) {
    const GridFunction w = load_input(run);
    const std::vector<PointReport> reports = classify_input(w, run);
    const fs::path dir = out_dir(run);
    const std::string stem = stem_of(run.inputs.front());
    const json doc = classification_json(w, reports, run);
    write_json(dir / (stem + ".classify.json"), doc);
    write_class_map(dir / (stem + ".classes.pgm"), w, reports);
    out << doc.at("counts").dump() << '\n';
    return kExitOk;
}

struct SweepOutput {
    std::string file;
    ESet set;
};

std::vector<SweepOutput> run_sweeps(const GridFunction& w, const RunConfig& run, json& index) {
    const std::vector<Ball> family = rational_ball_family(run.depth, w.dim());
    const LatticePtr lattice = make_lattice(w.dim());
    const std::string stem = stem_of(run.inputs.front());
    std::vector<SweepOutput> outputs;
    index = json::array();
    for (std::size_t ri = 0; ri < run.r0.size(); ++ri) {
        const SweepResult sweep = sweep_e_sets(w, run.deltas, run.tau, family, run.r0[ri], lattice, run.workers,
                                               run.sigma);
        for (std::size_t k = 0; k < sweep.sets.size(); ++k) {
            const ESet& set = sweep.sets[k];
            std::ostringstream name;
            name << stem << ".r" << ri << ".e" << k << ".eset.json";
            json entry = {{"r0", run.r0[ri]},
                          {"delta", set.params.delta},
                          {"ball", to_json(set.params.ball, w.dim())},
                          {"count", set.points.size()}};
            if (!set.points.empty()) {
                entry["file"] = name.str();
                outputs.push_back({name.str(), set});
            }
            index.push_back(entry);
        }
    }
    return outputs;
}

int cmd_esets(const RunConfig& run, std::ostream& out) {
    const GridFunction w = load_input(run);
    json index;
    const std::vector<SweepOutput> outputs = run_sweeps(w, run, index);
    const fs::path dir = out_dir(run);
    for (const SweepOutput& o : outputs) write_json(dir / o.file, eset_json(o.set, run));
    const std::string stem = stem_of(run.inputs.front());
    write_json(dir / (stem + ".esets.json"), {{"schema", kSchemaVersion}, {"config", to_json(run)}, {"sets", index}});
    out << outputs.size() << " non-empty E-sets of " << index.size() << '\n';
    return kExitOk;
}

std::vector<ConePair> violations_of(const ESet& set, const ConeSpec& cone, const RunConfig& run) {
    return verify_cone_property(set.points, cone, run.guard_cells * set.spacing, run.workers);
}

int cmd_verify(const RunConfig& run, std::ostream& out) {
    const ESet set = eset_from_json(read_json(run.inputs.front()));
    const ConeSpec cone = cone_from_params(set.params.ball, set.params.tau, set.params.r0, set.dim);
    const std::vector<ConePair> pairs = violations_of(set, cone, run);
    const double guard = run.guard_cells * set.spacing;
    write_json(out_dir(run) / (stem_of(run.inputs.front()) + ".violations.json"),
               violations_json(set, cone, guard, pairs, run));
    out << pairs.size() << " violation(s)\n";
    return pairs.empty() ? kExitOk : kExitVerificationFailed;
}

int cmd_cover(const RunConfig& run, std::ostream& out) {
    const ESet set = eset_from_json(read_json(run.inputs.front()));
    const ConeSpec cone = cone_from_params(set.params.ball, set.params.tau, set.params.r0, set.dim);
    const CoverReport report = cover_with_graphs(set.points, cone);
    const json doc = cover_json(set, report, run);
    write_json(out_dir(run) / (stem_of(run.inputs.front()) + ".cover.json"), doc);
    out << doc.at("failed_cells").get<std::size_t>() << " of " << report.cells.size() << " cell(s) failed\n";
    return report.all_pass() ? kExitOk : kExitVerificationFailed;
}

int cmd_report(const RunConfig& run, std::ostream& out) {
    const GridFunction w = load_input(run);
    const std::vector<PointReport> reports = classify_input(w, run);
    const json classes = classification_json(w, reports, run);
    json index;
    const std::vector<SweepOutput> outputs = run_sweeps(w, run, index);
    json sets = json::array();
    std::size_t violations = 0;
    std::size_t failed_cells = 0;
    std::size_t degenerate = 0;
    for (const SweepOutput& o : outputs) {
        json entry = {{"r0", o.set.params.r0},
                      {"delta", o.set.params.delta},
                      {"ball", to_json(o.set.params.ball, w.dim())},
                      {"count", o.set.points.size()}};
        try {
            const ConeSpec cone = cone_from_params(o.set.params.ball, o.set.params.tau, o.set.params.r0, w.dim());
            const std::size_t v = violations_of(o.set, cone, run).size();
            const CoverReport cover = cover_with_graphs(o.set.points, cone);
            std::size_t failed = 0;
            for (const CoverCell& c : cover.cells) failed += c.pass ? 0 : 1;
            const double worst = cover.worst_slope();
            entry["violations"] = v;
            entry["cells"] = cover.cells.size();
            entry["failed_cells"] = failed;
            entry["lipschitz"] = cone.lipschitz;
            entry["worst_slope"] = std::isinf(worst) ? json(nullptr) : json(worst);
            violations += v;
            failed_cells += failed;
        } catch (const Error& e) {
            if (e.code() != Errc::DegenerateCone) throw;
            entry["degenerate_cone"] = true;
            ++degenerate;
        }
        sets.push_back(entry);
    }
    const json doc = {{"schema", kSchemaVersion},
                      {"config", to_json(run)},
                      {"grid", classes.at("grid")},
                      {"values", classes.at("values")},
                      {"counts", classes.at("counts")},
                      {"esets", sets},
                      {"total_violations", violations},
                      {"total_failed_cells", failed_cells},
                      {"degenerate_cones", degenerate}};
    write_json(out_dir(run) / (stem_of(run.inputs.front()) + ".report.json"), doc);
    out << classes.at("counts").dump() << '\n'
        << outputs.size() << " non-empty E-sets, " << violations << " violation(s), " << failed_cells
        << " failed cell(s)\n";
    return kExitOk;
}

void add_classify_options(CLI::App& sub, RunConfig& run) {
    sub.add_option("--tol-cauchy", run.tol_cauchy, "Cauchy tolerance (fraction of the value range)");
    sub.add_option("--tol-const", run.tol_const, "constancy tolerance");
    sub.add_option("--tol-jump", run.tol_jump, "jump residual tolerance");
    sub.add_option("--sep-min", run.sep_min, "minimum |a - b|");
    sub.add_option("--sigma", run.sigma, "radius ratio between consecutive scales");
    sub.add_option("--r-min", run.r_min_cells, "smallest radius in grid cells");
    sub.add_flag("--extended", run.extended, "analyse arctan(u)");
}

void add_eset_options(CLI::App& sub, RunConfig& run) {
    sub.add_option("--delta", run.deltas, "oscillation thresholds")->delimiter(',');
    sub.add_option("--tau", run.tau, "sub-ball ratio in (0, 1)");
    sub.add_option("--depth", run.depth, "rational ball family depth");
    sub.add_option("--r0", run.r0, "largest radii")->delimiter(',');
    sub.add_option("--sigma", run.sigma, "radius ratio between consecutive scales");
    sub.add_flag("--extended", run.extended, "analyse arctan(u)");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig run;
    CLI::App app{"Blowup-based jump set analysis of sampled functions", "jumpset"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    auto common = [&](CLI::App* sub, const char* input_help) {
        sub->add_option("inputs", run.inputs, input_help)->required();
        sub->add_option("--out", run.out, "output directory");
        sub->add_option("--workers", run.workers, "worker threads");
        return sub;
    };
    CLI::App* gen = common(app.add_subcommand("gen", "write corpus grids and ground truth"),
                           "corpus names, spec files, or 'all'");
    CLI::App* classify = common(app.add_subcommand("classify", "classify every grid point"), "GF1 header");
    add_classify_options(*classify, run);
    CLI::App* esets = common(app.add_subcommand("esets", "extract E-sets"), "GF1 header");
    add_eset_options(*esets, run);
    CLI::App* verify = common(app.add_subcommand("verify", "check the cone property"), "E-set JSON");
    verify->add_option("--guard", run.guard_cells, "ignored pair distance in grid cells");
    CLI::App* cover = common(app.add_subcommand("cover", "cover an E-set by Lipschitz graphs"), "E-set JSON");
    CLI::App* report = common(app.add_subcommand("report", "full pipeline summary"), "GF1 header");
    add_eset_options(*report, run);
    report->add_option("--tol-cauchy", run.tol_cauchy, "Cauchy tolerance (fraction of the value range)");
    report->add_option("--tol-const", run.tol_const, "constancy tolerance");
    report->add_option("--tol-jump", run.tol_jump, "jump residual tolerance");
    report->add_option("--sep-min", run.sep_min, "minimum |a - b|");
    report->add_option("--guard", run.guard_cells, "ignored pair distance in grid cells");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    CLI::App* chosen = app.get_subcommands().front();
    run.command = chosen->get_name();
    try {
        run.validate();
        if (chosen != gen && run.inputs.size() != 1) throw Error(Errc::InvalidArgument, "exactly one input is expected");
    } catch (const Error& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (chosen == gen) return cmd_gen(run, out);
        if (chosen == classify) return cmd_classify(run, out);
        if (chosen == esets) return cmd_esets(run, out);
        if (chosen == verify) return cmd_verify(run, out);
        if (chosen == cover) return cmd_cover(run, out);
        return cmd_report(run, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDataError;
    }
}

}  // namespace jumpset
