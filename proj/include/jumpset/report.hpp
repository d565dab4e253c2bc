#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "jumpset/classify.hpp"
#include "jumpset/decompose.hpp"
#include "jumpset/synth.hpp"

namespace jumpset {

inline constexpr int kSchemaVersion = 1;

/// Resolved settings of one CLI run. `workers` and `out` are never serialized, so
/// outputs do not depend on the thread count.
struct RunConfig {
    std::string command;
    std::vector<std::string> inputs;
    double tol_cauchy = 0.02;
    double tol_const = 0.01;
    double tol_jump = 0.2;
    double sep_min = 0.1;
    double sigma = 0.8408964152537145;
    double r_min_cells = kDefaultMinRadiusCells;
    std::vector<double> r0{0.25, 0.125};
    int depth = 3;
    std::vector<double> deltas{0.1, 0.2, 0.4};
    double tau = 0.5;
    double guard_cells = 2.0;
    std::string out = ".";
    int workers = 1;
    bool extended = false;

    /// Throws InvalidArgument when a field violates its range.
    void validate() const;
    ClassifyConfig classify_config() const;
};

nlohmann::json to_json(const RunConfig& run);
nlohmann::json to_json(const Vec& v, int dim);
nlohmann::json to_json(const Ball& ball, int dim);
nlohmann::json to_json(const ConeSpec& cone);
nlohmann::json to_json(const GroundTruth& truth, const GridFunction& u);

/// Per-point classification document. Only points that are neither
/// ApproxContinuous nor Insufficient get a record; records are sorted by
/// grid index. With `extended`, values are arctan-space and finite jump
/// values are also reported mapped back.
nlohmann::json classification_json(const GridFunction& u, const std::vector<PointReport>& reports,
                                   const RunConfig& run);

nlohmann::json eset_json(const ESet& set, const RunConfig& run);

/// Reads an E-set document. Only params.{delta, tau, ball, r0}, dim and
/// points are required; spacing defaults to 0. Throws FormatError.
ESet eset_from_json(const nlohmann::json& j);

nlohmann::json violations_json(const ESet& set, const ConeSpec& cone, double guard,
                               const std::vector<ConePair>& pairs, const RunConfig& run);

nlohmann::json cover_json(const ESet& set, const CoverReport& report, const RunConfig& run);

/// UTF-8 JSON with sorted keys, two-space indent and a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

/// 8-bit binary PGM of the class codes. Rows run along axis 0; in 3D the
/// axis-2 slices are laid side by side.
void write_class_map(const std::filesystem::path& path, const GridFunction& u,
                     const std::vector<PointReport>& reports);

}  // namespace jumpset
