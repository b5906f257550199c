#ifndef RELTURAN_EXTRACTORS_HPP
#define RELTURAN_EXTRACTORS_HPP

#include "relturan/family.hpp"
#include "relturan/hypergraph.hpp"
#include "relturan/oracle.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace relturan {

struct ExtractorConfig {
    std::uint64_t seed = 1;
    int trials = 1000;
    // Homomorphism target size; when unset, t = round(c_t * Delta^{1/(r-1)})
    // clamped to [r, t_max].
    std::optional<int> t;
    double c_t = 1.0;
    int t_max = 24;
    // Replaces the formula probability of the deletion stage.
    std::optional<double> p_override;
    // Named threshold overrides: "D2".."D{r-1}" for the Berge schedule, "D"
    // for the single split of the b53, f5 and loose pipelines.
    std::map<std::string, double> thresholds;
    bool verify = true;
    // Worker threads for independent trials; results do not depend on it.
    int jobs = 1;
    std::size_t copy_budget = 5'000'000;
    OracleOptions oracle = default_oracle();

    static OracleOptions default_oracle()
    {
        OracleOptions o;
        o.budget = 200'000;
        return o;
    }
};

struct StageRecord {
    std::string stage;
    std::size_t input_edges = 0;
    std::size_t output_edges = 0;
    std::map<std::string, double> values;
    std::vector<std::string> notes;
};

struct ExtractionReport {
    Hypergraph retained;
    std::size_t input_edges = 0;
    DegreeProfile input_profile;
    // Family the output is certified against.
    std::string family;
    // The expected-count expression of the relevant argument, evaluated.
    double guarantee = 0.0;
    std::size_t achieved = 0;
    bool verified = false;      // a freeness check ran
    bool verified_free = false; // and found nothing
    std::vector<std::size_t> trial_log;
    std::vector<StageRecord> trace;
    std::vector<std::string> flags;
    // Named statistics, e.g. mean trial size, empirical event rates.
    std::map<std::string, double> stats;
    // Parameters actually used (c_t, t, p, trials, ...).
    std::map<std::string, double> parameters;

    void flag(const std::string& f);
};

using InnerExtractor = std::function<ExtractionReport(const Hypergraph&, const ExtractorConfig&)>;

/**
 * Random homomorphism into J: per trial, chi: V(H) -> V(J) uniform; keeps e
 * when chi(e) is an edge of J and differs from chi(f) for every other f
 * meeting e. Best trial wins (ties to the lower trial index). Stats record
 * the mean trial size and the empirical rate of chi(e) in E(J) per edge.
 */
ExtractionReport random_hom_extract(const Hypergraph& h, const Hypergraph& j, const ForbiddenFamily& family,
                                    const ExtractorConfig& cfg);

struct CodegreeSplit {
    std::vector<EdgeId> heavy;
    std::vector<EdgeId> light;
};

/**
 * heavy = edges containing some k-subset of k-degree >= D (each k-subset of a
 * transversal edge picks one vertex from k parts); light = the rest.
 * Requires `p` to be an r-partition of h.
 */
CodegreeSplit codegree_split(const Hypergraph& h, const Partition& p, int k, double d);

struct DyadicSelection {
    std::vector<EdgeId> edges;
    double d_prime = 0.0;
    int j = 0;
    // Chosen k parts (original indices) and the partition with them first.
    std::vector<int> index_set;
    Partition partition;
    // Size of the heavy class for the chosen index set.
    std::size_t heavy_for_index_set = 0;
};

/**
 * Chooses the index set I maximising the number of edges whose I-projection
 * has k-degree >= D, then the dyadic class [2^j D, 2^{j+1} D) of largest
 * size among those edges (ties to the smaller j). Throws InputError when at
 * most half of the edges are heavy.
 */
DyadicSelection dyadic_select(const Hypergraph& h, const Partition& p, int k, double d);

struct MatchingOptions {
    // Pipelines pass lenient = true: guard violations are flagged instead of thrown.
    bool lenient = false;
};

/**
 * Sparsify the prefix k-graph at rate p = D log(Delta) / Delta, prune
 * over-degree vertices with their whole prefix classes, take a greedy matching
 * of prefixes, run `inner` on the (r-k+1)-graph induced by parts k..r and lift
 * the result back. Prefix k-sets (parts 0..k-1 of p) must have k-degree in
 * [D, 2D) and D <= Delta / log(Delta).
 */
ExtractionReport matching_extract(const Hypergraph& h, const Partition& p, int k, double d,
                                  const ForbiddenFamily& family, const InnerExtractor& inner,
                                  const ExtractorConfig& cfg, const MatchingOptions& options = {});

/**
 * Per trial: keep each edge with probability p, enumerate the copies of the
 * family in the sample, delete edges greedily (most copies first, ties to the
 * lower id) until none is left. Best trial wins.
 */
ExtractionReport deletion_extract(const Hypergraph& h, const ForbiddenFamily& family, double p,
                                  const ExtractorConfig& cfg);

// Families the pipelines certify.
ForbiddenFamily berge_pipeline_family(int ell);
ForbiddenFamily b53_pipeline_family();

ExtractionReport pipeline_berge(const Hypergraph& h, int ell, const ExtractorConfig& cfg);
ExtractionReport pipeline_b53(const Hypergraph& h, const ExtractorConfig& cfg);
ExtractionReport pipeline_f5(const Hypergraph& h, const ExtractorConfig& cfg);
ExtractionReport pipeline_loose(const Hypergraph& h, int ell, const ExtractorConfig& cfg);

// "berge" | "b53" | "f5" | "loose"
ExtractionReport run_pipeline(const std::string& name, const Hypergraph& h, int ell, const ExtractorConfig& cfg);
ForbiddenFamily pipeline_family(const std::string& name, int ell);

// Natural log guarded below by 1.
double guarded_log(double x);

} // namespace relturan

#endif
