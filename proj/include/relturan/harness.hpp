#ifndef RELTURAN_HARNESS_HPP
#define RELTURAN_HARNESS_HPP

#include "relturan/extractors.hpp"
#include "relturan/generators.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace relturan {

/**
 * Plan file (JSON):
 *   {"hosts": ["complete:8,3", ...], "pipeline": "berge", "ell": 4,
 *    "seeds": [1, 2], "trials": 200, "output": "out.jsonl",
 *    "oracle_compare": true, "append": false, "jobs": 1,
 *    "t": 7, "c_t": 1.0, "t_max": 24, "p": 0.1}
 * Only hosts, pipeline and output are required.
 */
struct ExperimentPlan {
    std::vector<HostSpec> hosts;
    std::string pipeline = "berge";
    int ell = 4;
    std::vector<std::uint64_t> seeds{1};
    int trials = 1000;
    std::string output;
    bool oracle_compare = false;
    bool append = false;
    int jobs = 1;
    ExtractorConfig config;

    static ExperimentPlan from_json(const nlohmann::json& j);
    static ExperimentPlan load(const std::string& path);
};

// Oracle comparison is skipped above this many host edges.
inline constexpr std::size_t kOracleCompareCeiling = 30;

struct RunSummary {
    std::size_t records = 0;
    std::size_t reused = 0;
    std::size_t not_free = 0;
    std::size_t resource_errors = 0;
    std::string output;
    std::string csv;
};

std::string record_key(const HostSpec& host, const std::string& pipeline, int ell, std::uint64_t seed);

/**
 * One JSON line per (host, seed), in plan order. Lines go to <output>.partial
 * as they complete and the file is renamed at the end; a rerun picks up the
 * records already present in the partial file by key. The CSV companion is
 * <output minus .jsonl>.csv. Timing never enters the records, so fixed seeds
 * give byte-identical files.
 */
RunSummary run_plan(const ExperimentPlan& plan);

nlohmann::json report_to_json(const ExtractionReport& report, bool with_edges = true);
nlohmann::json oracle_to_json(const OracleResult& result);

struct ExponentFit {
    std::vector<std::pair<double, double>> points; // (Delta, ratio) used
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    std::optional<double> reference;
    std::vector<std::string> warnings;
};

// Least squares of log(ratio) on log(Delta). Non-positive points are dropped.
ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& points,
                         std::optional<double> reference = std::nullopt);

/**
 * Fits a result file: records are grouped by host, each host contributing its
 * best ratio over seeds. The reference exponent is taken from the pipeline.
 */
ExponentFit fit_results(const std::string& path);

// Lower-bound exponent the pipeline is built to reach; linear hosts matter for loose cycles.
std::optional<double> reference_exponent(const std::string& pipeline, int ell, int r, bool linear_host);

nlohmann::json fit_to_json(const ExponentFit& fit);

} // namespace relturan

#endif
