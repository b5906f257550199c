#include "relturan/extractors.hpp"

#include "relturan/error.hpp"
#include "relturan/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

namespace relturan {

namespace {

// Runs fn(i) for i in [0, count) on up to `jobs` threads; results by index.
template <typename T, typename Fn>
std::vector<T> run_trials(int count, int jobs, Fn fn)
{
    std::vector<T> out(static_cast<std::size_t>(count));
    const int workers = std::max(1, std::min(jobs, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i)
            out[static_cast<std::size_t>(i)] = fn(i);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < count; i += workers)
                    out[static_cast<std::size_t>(i)] = fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    for (auto& e : errors) {
        if (e)
            std::rethrow_exception(e);
    }
    return out;
}

std::uint64_t derive(std::uint64_t seed, std::uint64_t tag)
{
    std::uint64_t s = seed ^ (tag * 0xD1B54A32D192ED03ULL);
    return splitmix64(s);
}

void check_trials(const ExtractorConfig& cfg)
{
    if (cfg.trials < 1)
        throw InputError("trials must be at least 1");
}

void verify(ExtractionReport& report, const ForbiddenFamily& family, const ExtractorConfig& cfg)
{
    report.family = family.to_string();
    report.achieved = report.retained.edge_count();
    if (!cfg.verify)
        return;
    report.verified = true;
    report.verified_free = family.is_empty() || !contains_member(report.retained, family);
}

std::vector<Vertex> prefix_of(std::span<const Vertex> e, const Partition& p, int k)
{
    std::vector<Vertex> out;
    for (Vertex v : e) {
        if (p.part_of[v] < k)
            out.push_back(v);
    }
    return out;
}

std::vector<Vertex> suffix_of(std::span<const Vertex> e, const Partition& p, int k)
{
    std::vector<Vertex> out;
    for (Vertex v : e) {
        if (p.part_of[v] >= k - 1)
            out.push_back(v);
    }
    return out;
}

void require_partition(const Hypergraph& h, const Partition& p, int k)
{
    if (!p.is_r_partition_of(h))
        throw InputError("partition is not an r-partition of the host");
    if (k < 1 || k >= h.uniformity())
        throw InputError("k must satisfy 1 <= k < r");
}

} // namespace

double guarded_log(double x) { return std::max(std::log(std::max(x, 1.0)), 1.0); }

void ExtractionReport::flag(const std::string& f)
{
    if (std::find(flags.begin(), flags.end(), f) == flags.end())
        flags.push_back(f);
}

ExtractionReport random_hom_extract(const Hypergraph& h, const Hypergraph& j, const ForbiddenFamily& family,
                                    const ExtractorConfig& cfg)
{
    const int r = h.uniformity();
    if (j.uniformity() != r)
        throw InputError("host and target uniformities differ");
    const std::size_t t = j.vertex_count();
    if (t < static_cast<std::size_t>(r))
        throw InputError("target needs at least r vertices");
    check_trials(cfg);

    const std::size_t m = h.edge_count();
    const std::size_t n = h.vertex_count();
    const auto rr = static_cast<std::size_t>(r);
    const std::uint64_t base = derive(cfg.seed, 4);

    struct Trial {
        std::vector<EdgeId> kept;
        std::size_t injective_hits = 0;
    };
    auto trials = run_trials<Trial>(cfg.trials, cfg.jobs, [&](int index) {
        Rng rng = Rng::stream(base, static_cast<std::uint64_t>(index));
        std::vector<Vertex> chi(n);
        for (auto& c : chi)
            c = static_cast<Vertex>(rng.below(t));
        std::vector<Vertex> img(m * rr);
        std::vector<char> good(m, 0);
        Trial out;
        for (std::size_t id = 0; id < m; ++id) {
            auto e = h.edge(static_cast<EdgeId>(id));
            auto* dst = img.data() + id * rr;
            for (std::size_t i = 0; i < rr; ++i)
                dst[i] = chi[e[i]];
            std::sort(dst, dst + rr);
            if (std::adjacent_find(dst, dst + rr) != dst + rr)
                continue;
            if (j.has_edge(std::span<const Vertex>(dst, rr))) {
                good[id] = 1;
                ++out.injective_hits;
            }
        }
        for (std::size_t id = 0; id < m; ++id) {
            if (!good[id])
                continue;
            const auto* mine = img.data() + id * rr;
            bool clash = false;
            for (Vertex v : h.edge(static_cast<EdgeId>(id))) {
                for (EdgeId f : h.incident(v)) {
                    if (f == id)
                        continue;
                    const auto* other = img.data() + static_cast<std::size_t>(f) * rr;
                    if (std::equal(mine, mine + rr, other)) {
                        clash = true;
                        break;
                    }
                }
                if (clash)
                    break;
            }
            if (!clash)
                out.kept.push_back(static_cast<EdgeId>(id));
        }
        return out;
    });

    ExtractionReport report;
    report.input_edges = m;
    report.input_profile = degree_profile(h);
    std::size_t best = 0;
    double sum = 0;
    double hits = 0;
    for (std::size_t i = 0; i < trials.size(); ++i) {
        report.trial_log.push_back(trials[i].kept.size());
        sum += static_cast<double>(trials[i].kept.size());
        hits += static_cast<double>(trials[i].injective_hits);
        if (trials[i].kept.size() > trials[best].kept.size())
            best = i;
    }
    report.retained = h.subgraph(trials[best].kept);

    const double td = static_cast<double>(t);
    const double ej = static_cast<double>(j.edge_count());
    double fact = 1;
    for (int i = 2; i <= r; ++i)
        fact *= i;
    const double pa = fact * ej / std::pow(td, r);
    report.guarantee = ej * std::pow(td, -r) * static_cast<double>(m);
    report.stats["mean_trial"] = sum / cfg.trials;
    report.stats["injective_rate"] = m ? hits / (static_cast<double>(m) * cfg.trials) : 0.0;
    report.stats["injective_expected"] = pa;
    report.stats["injective_sigma"] = std::sqrt(pa * (1 - pa) / cfg.trials);

    // t >= r^2 4^r Delta_k^{1/(r-k)} for every k
    double guard = 0;
    for (int k = 1; k < r; ++k) {
        const double dk = static_cast<double>(k == 1 ? report.input_profile.max_degree : report.input_profile.delta(k));
        guard = std::max(guard, r * r * std::pow(4.0, r) * std::pow(std::max(dk, 1.0), 1.0 / (r - k)));
    }
    report.parameters["t"] = td;
    report.parameters["target_edges"] = ej;
    report.parameters["trials"] = cfg.trials;
    report.parameters["t_guard"] = guard;
    if (td < guard)
        report.flag("t_guard_unsatisfied");

    StageRecord stage{"random_hom", m, report.retained.edge_count(), {{"t", td}, {"target_edges", ej}}, {}};
    report.trace.push_back(stage);
    verify(report, family, cfg);
    return report;
}

CodegreeSplit codegree_split(const Hypergraph& h, const Partition& p, int k, double d)
{
    require_partition(h, p, k);
    KSetDegrees kd(h, k);
    CodegreeSplit out;
    for (std::size_t id = 0; id < h.edge_count(); ++id) {
        bool heavy = false;
        for_each_subset(h.edge(static_cast<EdgeId>(id)), static_cast<std::size_t>(k), [&](std::span<const Vertex> s) {
            heavy = heavy || static_cast<double>(kd.degree(s)) >= d;
        });
        (heavy ? out.heavy : out.light).push_back(static_cast<EdgeId>(id));
    }
    return out;
}

DyadicSelection dyadic_select(const Hypergraph& h, const Partition& p, int k, double d)
{
    require_partition(h, p, k);
    if (!(d > 0))
        throw InputError("threshold must be positive");
    const auto split = codegree_split(h, p, k, d);
    if (2 * split.heavy.size() <= h.edge_count())
        throw InputError("at most half of the edges are heavy; take the light branch");
    KSetDegrees kd(h, k);
    const int r = h.uniformity();

    std::vector<int> parts(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i)
        parts[static_cast<std::size_t>(i)] = i;
    std::vector<int> best_set;
    std::vector<std::pair<EdgeId, std::size_t>> best_edges;
    for_each_subset(std::span<const int>(parts), static_cast<std::size_t>(k), [&](std::span<const int> index) {
        std::vector<std::pair<EdgeId, std::size_t>> edges;
        for (std::size_t id = 0; id < h.edge_count(); ++id) {
            std::vector<Vertex> s;
            for (Vertex v : h.edge(static_cast<EdgeId>(id))) {
                if (std::find(index.begin(), index.end(), p.part_of[v]) != index.end())
                    s.push_back(v);
            }
            const auto deg = kd.degree(s);
            if (static_cast<double>(deg) >= d)
                edges.emplace_back(static_cast<EdgeId>(id), deg);
        }
        if (best_set.empty() || edges.size() > best_edges.size()) {
            best_set.assign(index.begin(), index.end());
            best_edges = std::move(edges);
        }
    });

    std::map<int, std::vector<EdgeId>> classes;
    for (auto [id, deg] : best_edges) {
        int j = 0;
        while (static_cast<double>(deg) >= d * std::pow(2.0, j + 1))
            ++j;
        classes[j].push_back(id);
    }
    DyadicSelection out;
    out.index_set = best_set;
    out.heavy_for_index_set = best_edges.size();
    for (auto& [j, ids] : classes) {
        if (ids.size() > out.edges.size()) {
            out.edges = ids;
            out.j = j;
        }
    }
    out.d_prime = d * std::pow(2.0, out.j);
    std::vector<int> order(best_set);
    for (int i = 0; i < r; ++i) {
        if (std::find(best_set.begin(), best_set.end(), i) == best_set.end())
            order.push_back(i);
    }
    out.partition = p.reordered(order);
    return out;
}

ExtractionReport matching_extract(const Hypergraph& h, const Partition& p, int k, double d,
                                  const ForbiddenFamily& family, const InnerExtractor& inner,
                                  const ExtractorConfig& cfg, const MatchingOptions& options)
{
    require_partition(h, p, k);
    if (k < 2)
        throw InputError("matching extraction needs k >= 2");
    if (!(d > 0))
        throw InputError("threshold must be positive");
    const int r = h.uniformity();
    ExtractionReport report;
    report.input_edges = h.edge_count();
    report.input_profile = degree_profile(h);
    const double delta = static_cast<double>(report.input_profile.max_degree);
    const double lg = guarded_log(delta);

    auto violation = [&](const std::string& what) {
        if (!options.lenient)
            throw InputError(what);
        report.flag(what);
    };
    if (d > delta / lg)
        violation("D_above_delta_over_log_delta");

    // Prefix classes, ordered by their first edge id.
    KSetDegrees kd(h, k);
    std::map<std::vector<Vertex>, std::size_t> class_index;
    std::vector<std::vector<Vertex>> prefixes;
    std::vector<std::vector<EdgeId>> members;
    for (std::size_t id = 0; id < h.edge_count(); ++id) {
        auto pre = prefix_of(h.edge(static_cast<EdgeId>(id)), p, k);
        const auto deg = static_cast<double>(kd.degree(pre));
        if (deg < d || deg >= 2 * d)
            violation("prefix_degree_outside_D_2D");
        auto [it, fresh] = class_index.emplace(pre, prefixes.size());
        if (fresh) {
            prefixes.push_back(pre);
            members.emplace_back();
        }
        members[it->second].push_back(static_cast<EdgeId>(id));
    }

    double prob = d * lg / std::max(delta, 1.0);
    if (prob > 1) {
        prob = 1;
        report.flag("p_clamped");
    }
    const double threshold = 8 * d * lg * lg * lg;
    Rng rng = Rng::stream(derive(cfg.seed, 2), 0);
    std::vector<char> sampled(prefixes.size(), 0);
    for (std::size_t c = 0; c < prefixes.size(); ++c)
        sampled[c] = rng.bernoulli(prob);

    std::vector<std::size_t> deg(h.vertex_count(), 0);
    std::size_t sampled_edges = 0;
    for (std::size_t c = 0; c < prefixes.size(); ++c) {
        if (!sampled[c])
            continue;
        for (EdgeId id : members[c]) {
            ++sampled_edges;
            for (Vertex v : h.edge(id))
                ++deg[v];
        }
    }
    // Drop every sampled class holding an edge through an over-degree vertex.
    std::vector<char> alive(sampled);
    std::size_t z_edges = 0;
    for (std::size_t c = 0; c < prefixes.size(); ++c) {
        if (!sampled[c])
            continue;
        bool bad = false;
        for (EdgeId id : members[c]) {
            for (Vertex v : h.edge(id))
                bad = bad || static_cast<double>(deg[v]) > threshold;
        }
        if (bad) {
            alive[c] = 0;
            z_edges += members[c].size();
        }
    }

    // Greedy matching on surviving prefixes, in class order.
    std::vector<char> used(h.vertex_count(), 0);
    std::vector<std::size_t> matched;
    for (std::size_t c = 0; c < prefixes.size(); ++c) {
        if (!alive[c])
            continue;
        bool free = std::none_of(prefixes[c].begin(), prefixes[c].end(), [&](Vertex v) { return used[v]; });
        if (!free)
            continue;
        for (Vertex v : prefixes[c])
            used[v] = 1;
        matched.push_back(c);
    }

    std::vector<Edge> projected;
    std::map<Edge, EdgeId> lift;
    std::size_t surviving = 0;
    for (std::size_t c = 0; c < prefixes.size(); ++c)
        surviving += alive[c] ? members[c].size() : 0;
    for (std::size_t c : matched) {
        for (EdgeId id : members[c]) {
            auto s = suffix_of(h.edge(id), p, k);
            lift.emplace(s, id);
            projected.push_back(std::move(s));
        }
    }
    const Hypergraph gm = Hypergraph::from_edge_set(r - k + 1, h.vertex_count(), projected);

    StageRecord stage;
    stage.stage = "matching_extract";
    stage.input_edges = h.edge_count();
    stage.values = {{"k", k},
                    {"D", d},
                    {"p", prob},
                    {"prune_threshold", threshold},
                    {"sampled_edges", static_cast<double>(sampled_edges)},
                    {"z_edges", static_cast<double>(z_edges)},
                    {"surviving_edges", static_cast<double>(surviving)},
                    {"matching_size", static_cast<double>(matched.size())},
                    {"matching_bound", static_cast<double>(surviving) / (16.0 * k * d * lg * lg * lg)},
                    {"contracted_edges", static_cast<double>(gm.edge_count())}};
    report.stats["z_fraction"] = sampled_edges ? static_cast<double>(z_edges) / static_cast<double>(sampled_edges) : 0.0;
    report.parameters["p"] = prob;
    report.parameters["D"] = d;

    std::vector<EdgeId> keep;
    if (gm.edge_count() == 0) {
        report.flag("degenerate_empty_matching");
    } else {
        ExtractorConfig sub = cfg;
        sub.seed = derive(cfg.seed, 3);
        ExtractionReport in = inner(gm, sub);
        for (const auto& f : in.flags)
            report.flag("inner:" + f);
        if (in.verified && !in.verified_free)
            report.flag("inner_not_free");
        for (std::size_t id = 0; id < in.retained.edge_count(); ++id) {
            auto e = in.retained.edge(static_cast<EdgeId>(id));
            keep.push_back(lift.at(Edge(e.begin(), e.end())));
        }
        report.guarantee = in.guarantee;
        report.trial_log = in.trial_log;
        for (const auto& [key, v] : in.stats)
            report.stats["inner_" + key] = v;
        stage.output_edges = keep.size();
        report.trace.push_back(stage);
        for (auto rec : in.trace) {
            rec.stage = "inner/" + rec.stage;
            report.trace.push_back(std::move(rec));
        }
    }
    if (gm.edge_count() == 0)
        report.trace.push_back(stage);
    std::sort(keep.begin(), keep.end());
    report.retained = h.subgraph(keep);
    verify(report, family, cfg);
    return report;
}

ExtractionReport deletion_extract(const Hypergraph& h, const ForbiddenFamily& family, double p,
                                  const ExtractorConfig& cfg)
{
    if (!(p > 0.0 && p <= 1.0))
        throw InputError("deletion probability must lie in (0, 1]");
    check_trials(cfg);
    const std::uint64_t base = derive(cfg.seed, 5);
    const std::size_t m = h.edge_count();

    struct Trial {
        std::vector<EdgeId> kept;
        std::size_t sampled = 0;
        std::size_t copies = 0;
    };
    auto trials = run_trials<Trial>(cfg.trials, cfg.jobs, [&](int index) {
        Rng rng = Rng::stream(base, static_cast<std::uint64_t>(index));
        std::vector<EdgeId> sample;
        for (std::size_t id = 0; id < m; ++id) {
            if (p >= 1.0 || rng.bernoulli(p))
                sample.push_back(static_cast<EdgeId>(id));
        }
        const Hypergraph g = h.subgraph(sample);
        std::vector<std::vector<EdgeId>> copies;
        for_each_copy(
            g, family, [&](std::span<const EdgeId> c) { copies.emplace_back(c.begin(), c.end()); }, cfg.copy_budget);

        // Greedy hitting set: most copies first, ties to the lower id.
        std::vector<std::vector<std::size_t>> holding(sample.size());
        std::vector<std::size_t> count(sample.size(), 0);
        for (std::size_t c = 0; c < copies.size(); ++c) {
            for (EdgeId e : copies[c]) {
                holding[e].push_back(c);
                ++count[e];
            }
        }
        std::vector<char> hit(copies.size(), 0);
        std::vector<char> removed(sample.size(), 0);
        std::size_t open = copies.size();
        while (open > 0) {
            std::size_t pick = 0;
            for (std::size_t e = 1; e < count.size(); ++e) {
                if (count[e] > count[pick])
                    pick = e;
            }
            removed[pick] = 1;
            for (std::size_t c : holding[pick]) {
                if (hit[c])
                    continue;
                hit[c] = 1;
                --open;
                for (EdgeId e : copies[c])
                    --count[e];
            }
        }
        Trial out;
        out.sampled = sample.size();
        out.copies = copies.size();
        for (std::size_t e = 0; e < sample.size(); ++e) {
            if (!removed[e])
                out.kept.push_back(sample[e]);
        }
        return out;
    });

    ExtractionReport report;
    report.input_edges = m;
    report.input_profile = degree_profile(h);
    std::size_t best = 0;
    double kept = 0;
    double sampled = 0;
    double copies = 0;
    for (std::size_t i = 0; i < trials.size(); ++i) {
        report.trial_log.push_back(trials[i].kept.size());
        kept += static_cast<double>(trials[i].kept.size());
        sampled += static_cast<double>(trials[i].sampled);
        copies += static_cast<double>(trials[i].copies);
        if (trials[i].kept.size() > trials[best].kept.size())
            best = i;
    }
    const double n = cfg.trials;
    report.retained = h.subgraph(trials[best].kept);
    report.guarantee = p * static_cast<double>(m);
    report.stats["mean_trial"] = kept / n;
    report.stats["mean_sampled"] = sampled / n;
    report.stats["mean_copies"] = copies / n;
    report.stats["mean_sampled_minus_copies"] = (sampled - copies) / n;
    report.parameters["p"] = p;
    report.parameters["trials"] = cfg.trials;
    report.trace.push_back({"deletion", m, report.retained.edge_count(), {{"p", p}}, {}});
    verify(report, family, cfg);
    return report;
}

} // namespace relturan
