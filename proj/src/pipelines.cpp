#include "relturan/error.hpp"
#include "relturan/extractors.hpp"
#include "relturan/rng.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace relturan {

namespace {

std::uint64_t derive(std::uint64_t seed, std::uint64_t tag)
{
    std::uint64_t s = seed ^ (tag * 0x9FB21C651E98DF25ULL);
    return splitmix64(s);
}

double threshold(const ExtractorConfig& cfg, const std::string& name, double fallback)
{
    auto it = cfg.thresholds.find(name);
    return it == cfg.thresholds.end() ? fallback : it->second;
}

ExtractionReport start_report(const Hypergraph& h)
{
    ExtractionReport report;
    report.input_edges = h.edge_count();
    report.input_profile = degree_profile(h);
    return report;
}

void finish(ExtractionReport& report, const ForbiddenFamily& family, const ExtractorConfig& cfg)
{
    report.family = family.to_string();
    report.achieved = report.retained.edge_count();
    report.verified = false;
    report.verified_free = false;
    if (cfg.verify) {
        report.verified = true;
        report.verified_free = !contains_member(report.retained, family);
    }
}

// Copies the stage outcome into the pipeline report.
void absorb(ExtractionReport& report, ExtractionReport stage, const std::string& prefix = "")
{
    report.retained = std::move(stage.retained);
    report.guarantee = stage.guarantee;
    report.trial_log = std::move(stage.trial_log);
    for (auto& rec : stage.trace) {
        rec.stage = prefix + rec.stage;
        report.trace.push_back(std::move(rec));
    }
    for (const auto& f : stage.flags)
        report.flag(f);
    for (const auto& [k, v] : stage.stats)
        report.stats[k] = v;
    for (const auto& [k, v] : stage.parameters)
        report.parameters[k] = v;
}

bool degenerate(const Hypergraph& h)
{
    const auto delta = degree_profile(h).max_degree;
    return delta <= static_cast<std::size_t>(h.uniformity()) || h.edge_count() <= 2;
}

ExtractionReport oracle_answer(const Hypergraph& h, const ForbiddenFamily& family, const ExtractorConfig& cfg)
{
    ExtractionReport report = start_report(h);
    OracleResult res = ex_relative(h, family, cfg.oracle);
    report.retained = res.witness;
    report.guarantee = static_cast<double>(res.optimum);
    report.flag("degenerate_host");
    if (!res.proved_exact)
        report.flag("oracle_inexact");
    report.trace.push_back({"oracle", h.edge_count(), res.optimum, {{"nodes", static_cast<double>(res.nodes)}}, {}});
    finish(report, family, cfg);
    return report;
}

int target_size(const ExtractorConfig& cfg, int r, double delta, ExtractionReport& report)
{
    if (cfg.t) {
        if (*cfg.t < r)
            throw InputError("t must be at least r");
        return *cfg.t;
    }
    const double raw = cfg.c_t * std::pow(std::max(delta, 1.0), 1.0 / std::max(r - 1, 1));
    auto t = static_cast<int>(std::llround(raw));
    if (t < r) {
        t = r;
        report.flag("t_raised_to_r");
    }
    if (t > cfg.t_max) {
        t = cfg.t_max;
        report.flag("t_capped");
    }
    report.parameters["c_t"] = cfg.c_t;
    report.parameters["t_formula"] = raw;
    return t;
}

ExtractionReport homomorphism_stage(const Hypergraph& h, const ForbiddenFamily& target_family,
                                    const ForbiddenFamily& family, double delta, const ExtractorConfig& cfg,
                                    ExtractionReport& report)
{
    const int r = h.uniformity();
    const int t = target_size(cfg, r, delta, report);
    const OracleResult target = ex_classical(t, r, target_family, cfg.oracle);
    if (!target.proved_exact)
        report.flag("target_inexact");
    ExtractorConfig sub = cfg;
    sub.seed = derive(cfg.seed, 4);
    auto out = random_hom_extract(h, target.witness, family, sub);
    out.trace.back().values["target_proved_exact"] = target.proved_exact;
    return out;
}

// Heavy branch shared by every pipeline: dyadic class, then matching extraction.
ExtractionReport heavy_stage(const Hypergraph& cur, const Partition& part, int k, double d,
                             const ForbiddenFamily& family, const InnerExtractor& inner, const ExtractorConfig& cfg,
                             ExtractionReport& report)
{
    const auto sel = dyadic_select(cur, part, k, d);
    const Hypergraph chosen = cur.subgraph(sel.edges);
    StageRecord rec{"dyadic_select", cur.edge_count(), chosen.edge_count(), {{"D", d}, {"D_prime", sel.d_prime}, {"j", sel.j}}, {}};
    std::string index = "I=";
    for (int i : sel.index_set)
        index += std::to_string(i + 1);
    rec.notes.push_back(index);
    report.trace.push_back(rec);
    ExtractorConfig sub = cfg;
    sub.seed = derive(cfg.seed, 2);
    MatchingOptions lenient{true};
    return matching_extract(chosen, sel.partition, k, sel.d_prime, family, inner, sub, lenient);
}

struct SplitOutcome {
    bool heavy = false;
    Hypergraph light;
};

SplitOutcome split_stage(const Hypergraph& cur, const Partition& part, int k, double d, ExtractionReport& report)
{
    const auto split = codegree_split(cur, part, k, d);
    SplitOutcome out;
    out.heavy = 2 * split.heavy.size() > cur.edge_count();
    report.trace.push_back({"codegree_split",
                            cur.edge_count(),
                            out.heavy ? split.heavy.size() : split.light.size(),
                            {{"k", k}, {"D", d}, {"heavy", static_cast<double>(split.heavy.size())},
                             {"light", static_cast<double>(split.light.size())}},
                            {out.heavy ? "heavy" : "light"}});
    if (!out.heavy)
        out.light = cur.subgraph(split.light);
    return out;
}

PartiteReduction partite_stage(const Hypergraph& h, const ExtractorConfig& cfg, ExtractionReport& report)
{
    auto red = partite_reduce(h, derive(cfg.seed, 1));
    report.trace.push_back({"partite_reduce", h.edge_count(), red.subgraph.edge_count(),
                            {{"attempts", red.attempts}, {"moves", red.moves}}, {}});
    return red;
}

std::vector<Hypergraph> loose_projections(int ell, int r)
{
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::vector<Hypergraph>> memo;
    std::lock_guard lock(mutex);
    auto key = std::make_pair(ell, r);
    auto it = memo.find(key);
    if (it == memo.end())
        it = memo.emplace(key, project_family(loose_cycle(ell, r), 2)).first;
    return it->second;
}

} // namespace

ForbiddenFamily berge_pipeline_family(int ell)
{
    return ForbiddenFamily::union_of({ForbiddenFamily::berge_upto_nosun(ell), ForbiddenFamily::sunflower_plus(ell)});
}

ForbiddenFamily b53_pipeline_family() { return ForbiddenFamily::berge(5); }

ExtractionReport pipeline_berge(const Hypergraph& h, int ell, const ExtractorConfig& cfg)
{
    if (ell < 3)
        throw InputError("the Berge pipeline needs ell >= 3");
    const int r = h.uniformity();
    if (r < 2)
        throw InputError("uniformity must be at least 2");
    const ForbiddenFamily family = berge_pipeline_family(ell);
    if (degenerate(h))
        return oracle_answer(h, family, cfg);

    ExtractionReport report = start_report(h);
    const double delta = static_cast<double>(report.input_profile.max_degree);
    report.parameters["ell"] = ell;
    if (r == 2) {
        absorb(report, homomorphism_stage(h, ForbiddenFamily::berge_upto(ell), family, delta, cfg, report));
        finish(report, family, cfg);
        return report;
    }

    auto red = partite_stage(h, cfg, report);
    Hypergraph cur = red.subgraph;
    for (int k = 2; k < r; ++k) {
        const double d = threshold(cfg, "D" + std::to_string(k), std::pow(delta, static_cast<double>(r - k) / (r - 1)));
        auto split = split_stage(cur, red.partition, k, d, report);
        if (split.heavy) {
            InnerExtractor inner = [ell](const Hypergraph& g, const ExtractorConfig& c) { return pipeline_berge(g, ell, c); };
            absorb(report, heavy_stage(cur, red.partition, k, d, family, inner, cfg, report));
            finish(report, family, cfg);
            return report;
        }
        cur = std::move(split.light);
    }
    absorb(report, homomorphism_stage(cur, ForbiddenFamily::berge_upto(ell), family, delta, cfg, report));
    finish(report, family, cfg);
    return report;
}

ExtractionReport pipeline_b53(const Hypergraph& h, const ExtractorConfig& cfg)
{
    if (h.uniformity() != 3)
        throw InputError("the B5 pipeline needs a 3-graph");
    const ForbiddenFamily family = b53_pipeline_family();
    if (degenerate(h))
        return oracle_answer(h, family, cfg);
    ExtractionReport report = start_report(h);
    const double delta = static_cast<double>(report.input_profile.max_degree);
    auto red = partite_stage(h, cfg, report);
    const double d = threshold(cfg, "D", std::sqrt(delta));
    auto split = split_stage(red.subgraph, red.partition, 2, d, report);
    if (split.heavy) {
        InnerExtractor inner = [](const Hypergraph& g, const ExtractorConfig& c) { return pipeline_berge(g, 5, c); };
        absorb(report, heavy_stage(red.subgraph, red.partition, 2, d, family, inner, cfg, report));
    } else {
        const auto target = ForbiddenFamily::union_of({ForbiddenFamily::berge_upto(2), ForbiddenFamily::berge(5)});
        absorb(report, homomorphism_stage(split.light, target, family, delta, cfg, report));
    }
    finish(report, family, cfg);
    return report;
}

ExtractionReport pipeline_f5(const Hypergraph& h, const ExtractorConfig& cfg)
{
    if (h.uniformity() != 3)
        throw InputError("the F5 pipeline needs a 3-graph");
    const ForbiddenFamily family = ForbiddenFamily::f5();
    if (degenerate(h))
        return oracle_answer(h, family, cfg);
    ExtractionReport report = start_report(h);
    const double delta = static_cast<double>(report.input_profile.max_degree);
    auto red = partite_stage(h, cfg, report);
    const double d = threshold(cfg, "D", std::pow(delta, 0.8));
    auto split = split_stage(red.subgraph, red.partition, 2, d, report);
    if (split.heavy) {
        // The heavy side must avoid P2(F5) = {C4}; graphs of girth >= 5 do.
        InnerExtractor inner = [](const Hypergraph& g, const ExtractorConfig& c) { return pipeline_berge(g, 4, c); };
        absorb(report, heavy_stage(red.subgraph, red.partition, 2, d, family, inner, cfg, report));
    } else {
        double p = cfg.p_override.value_or(std::pow(delta, -0.6) / 9.0);
        if (p > 1) {
            p = 1;
            report.flag("p_clamped");
        }
        ExtractorConfig sub = cfg;
        sub.seed = derive(cfg.seed, 5);
        auto del = deletion_extract(split.light, family, p, sub);
        const double e = static_cast<double>(split.light.edge_count());
        const double d2 = static_cast<double>(degree_profile(split.light).delta(2));
        // p e(H'') - p^4 * 9 D Delta e(H'')
        const double guarantee = p * e - std::pow(p, 4) * 9 * d2 * delta * e;
        absorb(report, std::move(del));
        report.guarantee = guarantee;
        report.stats["closed_form_bound"] = (1.0 / 486 - 1.0 / 729) * std::pow(delta, -0.6) * static_cast<double>(h.edge_count());
    }
    finish(report, family, cfg);
    return report;
}

ExtractionReport pipeline_loose(const Hypergraph& h, int ell, const ExtractorConfig& cfg)
{
    if (ell < 3)
        throw InputError("loose cycles need ell >= 3");
    const int r = h.uniformity();
    if (r < 3)
        throw InputError("the loose pipeline needs r >= 3");
    const ForbiddenFamily family = ForbiddenFamily::loose(ell);
    if (degenerate(h))
        return oracle_answer(h, family, cfg);
    ExtractionReport report = start_report(h);
    report.parameters["ell"] = ell;
    const double delta = static_cast<double>(report.input_profile.max_degree);
    auto red = partite_stage(h, cfg, report);
    const double d = threshold(cfg, "D", std::pow(delta, 1.0 / ell));
    auto split = split_stage(red.subgraph, red.partition, 2, d, report);
    if (split.heavy) {
        const auto projections = loose_projections(ell, r);
        InnerExtractor inner;
        if (projections.empty()) {
            inner = [](const Hypergraph& g, const ExtractorConfig&) {
                ExtractionReport id;
                id.input_edges = g.edge_count();
                id.retained = g;
                id.guarantee = static_cast<double>(g.edge_count());
                id.trace.push_back({"identity", g.edge_count(), g.edge_count(), {}, {}});
                return id;
            };
        } else {
            auto patterns = ForbiddenFamily::explicit_patterns(projections);
            inner = [patterns](const Hypergraph& g, const ExtractorConfig& c) {
                ExtractorConfig one = c;
                one.trials = 1;
                return deletion_extract(g, patterns, 1.0, one);
            };
        }
        absorb(report, heavy_stage(red.subgraph, red.partition, 2, d, family, inner, cfg, report));
    } else {
        const double ell1 = ell - 1;
        const double d2 = std::max(1.0, static_cast<double>(degree_profile(split.light).delta(2)));
        double p = cfg.p_override.value_or(std::pow(3.0, -1 - 2 / ell1) * std::pow(delta, -1 + 1 / ell1) *
                                           std::pow(d2, -1 / ell1));
        if (p > 1) {
            p = 1;
            report.flag("p_clamped");
        }
        report.parameters["D_effective"] = d2;
        ExtractorConfig sub = cfg;
        sub.seed = derive(cfg.seed, 5);
        auto del = deletion_extract(split.light, family, p, sub);
        const double e = static_cast<double>(split.light.edge_count());
        // p e - p^l r^l D Delta^{l-2} e
        const double guarantee =
            p * e - std::pow(p, ell) * std::pow(static_cast<double>(r), ell) * d2 * std::pow(delta, ell - 2) * e;
        absorb(report, std::move(del));
        report.guarantee = guarantee;
    }
    finish(report, family, cfg);
    return report;
}

ForbiddenFamily pipeline_family(const std::string& name, int ell)
{
    if (name == "berge")
        return berge_pipeline_family(ell);
    if (name == "b53")
        return b53_pipeline_family();
    if (name == "f5")
        return ForbiddenFamily::f5();
    if (name == "loose")
        return ForbiddenFamily::loose(ell);
    throw InputError("unknown pipeline '" + name + "'");
}

ExtractionReport run_pipeline(const std::string& name, const Hypergraph& h, int ell, const ExtractorConfig& cfg)
{
    if (name == "berge")
        return pipeline_berge(h, ell, cfg);
    if (name == "b53")
        return pipeline_b53(h, cfg);
    if (name == "f5")
        return pipeline_f5(h, cfg);
    if (name == "loose")
        return pipeline_loose(h, ell, cfg);
    throw InputError("unknown pipeline '" + name + "'");
}

} // namespace relturan
