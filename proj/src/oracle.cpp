#include "relturan/oracle.hpp"

#include "relturan/error.hpp"
#include "relturan/hg_io.hpp"
#include "relturan/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

namespace relturan {

namespace {

using json = nlohmann::json;

/**
 * A growing family-free edge set of a fixed host. conflict(c) looks for a
 * member through c in S + c and returns its host edge ids.
 */
class FreeSet {
public:
    FreeSet(const Hypergraph& host, const ForbiddenFamily& family) : host_(host), family_(family) {}

    std::optional<std::vector<EdgeId>> conflict(const std::vector<EdgeId>& s, EdgeId c) const
    {
        if (family_.is_empty())
            return std::nullopt;
        std::vector<Edge> edges;
        edges.reserve(s.size() + 1);
        for (EdgeId id : s) {
            auto e = host_.edge(id);
            edges.emplace_back(e.begin(), e.end());
        }
        auto e = host_.edge(c);
        edges.emplace_back(e.begin(), e.end());
        const Hypergraph g(host_.uniformity(), host_.vertex_count(), std::move(edges));
        auto w = find_member(g, family_, static_cast<EdgeId>(s.size()));
        if (!w)
            return std::nullopt;
        std::vector<EdgeId> ids;
        for (EdgeId local : w->edges())
            ids.push_back(local < s.size() ? s[local] : c);
        return ids;
    }

private:
    const Hypergraph& host_;
    const ForbiddenFamily& family_;
};

class BranchAndBound {
public:
    BranchAndBound(const FreeSet& free, std::uint64_t budget) : free_(free), budget_(budget) {}

    // Returns false when the budget ran out.
    bool run(std::vector<EdgeId> start, std::vector<EdgeId> candidates, std::vector<EdgeId> incumbent)
    {
        best_ = std::move(incumbent);
        recurse(start, candidates);
        return !exhausted_;
    }

    const std::vector<EdgeId>& best() const { return best_; }
    std::uint64_t nodes() const { return nodes_; }

private:
    void recurse(std::vector<EdgeId>& s, const std::vector<EdgeId>& cand)
    {
        if (exhausted_)
            return;
        if (++nodes_ > budget_) {
            exhausted_ = true;
            return;
        }
        if (s.size() + cand.size() <= best_.size())
            return;
        if (cand.empty()) {
            best_ = s;
            return;
        }
        const EdgeId e = cand.front();
        s.push_back(e);
        std::vector<EdgeId> next;
        for (std::size_t i = 1; i < cand.size(); ++i) {
            if (s.size() + (cand.size() - i) + next.size() <= best_.size())
                break;
            if (!free_.conflict(s, cand[i]))
                next.push_back(cand[i]);
        }
        recurse(s, next);
        s.pop_back();
        std::vector<EdgeId> rest(cand.begin() + 1, cand.end());
        recurse(s, rest);
    }

    const FreeSet& free_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    bool exhausted_ = false;
    std::vector<EdgeId> best_;
};

// Randomised greedy insertion followed by (1 -> 2) swaps.
std::vector<EdgeId> greedy_local_search(const Hypergraph& host, const FreeSet& free, Rng& rng)
{
    const std::size_t m = host.edge_count();
    std::vector<EdgeId> order(m);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(std::span<EdgeId>(order));

    std::vector<EdgeId> s;
    std::vector<char> in(m, 0);
    // Blocking witness (host edge ids) per rejected candidate.
    std::vector<std::vector<EdgeId>> blocked(m);
    for (EdgeId c : order) {
        if (auto w = free.conflict(s, c)) {
            blocked[c] = std::move(*w);
        } else {
            s.push_back(c);
            in[c] = 1;
        }
    }

    bool improved = true;
    for (int pass = 0; improved && pass < 8; ++pass) {
        improved = false;
        std::vector<EdgeId> scan(s);
        rng.shuffle(std::span<EdgeId>(scan));
        for (EdgeId drop : scan) {
            std::vector<EdgeId> trial;
            for (EdgeId x : s) {
                if (x != drop)
                    trial.push_back(x);
            }
            std::vector<EdgeId> freed;
            for (EdgeId c : order) {
                if (in[c] || c == drop || blocked[c].empty())
                    continue;
                if (std::find(blocked[c].begin(), blocked[c].end(), drop) == blocked[c].end())
                    continue;
                freed.push_back(c);
            }
            std::vector<EdgeId> added;
            for (EdgeId c : freed) {
                if (!free.conflict(trial, c)) {
                    trial.push_back(c);
                    added.push_back(c);
                }
            }
            if (added.size() < 2)
                continue;
            s = std::move(trial);
            in[drop] = 0;
            for (EdgeId c : added) {
                in[c] = 1;
                blocked[c].clear();
            }
            // Refresh every witness that relied on the dropped edge.
            for (EdgeId c : order) {
                if (in[c])
                    continue;
                if (c == drop || std::find(blocked[c].begin(), blocked[c].end(), drop) != blocked[c].end()) {
                    auto w = free.conflict(s, c);
                    if (!w) {
                        s.push_back(c);
                        in[c] = 1;
                        blocked[c].clear();
                    } else {
                        blocked[c] = std::move(*w);
                    }
                }
            }
            improved = true;
        }
    }
    return s;
}

std::mutex memo_mutex;
std::map<std::string, OracleResult>& memo()
{
    static std::map<std::string, OracleResult> table;
    return table;
}

std::string exact_key(const std::string& family, const std::string& host) { return family + "|" + host; }

std::string inexact_key(const std::string& family, const std::string& host, const OracleOptions& o)
{
    return family + "|" + host + "|inexact:" + std::to_string(o.budget) + "," + std::to_string(o.restarts) + "," +
           std::to_string(o.seed);
}

std::optional<OracleResult> recall(const std::string& key, const OracleOptions& o)
{
    {
        std::lock_guard lock(memo_mutex);
        auto it = memo().find(key);
        if (it != memo().end())
            return it->second;
    }
    if (o.cache) {
        if (auto hit = o.cache->lookup(key)) {
            std::lock_guard lock(memo_mutex);
            memo()[key] = *hit;
            return hit;
        }
    }
    return std::nullopt;
}

void remember(const std::string& key, const OracleResult& r, const OracleOptions& o)
{
    {
        std::lock_guard lock(memo_mutex);
        memo()[key] = r;
    }
    if (o.cache)
        o.cache->store(key, r);
}

Hypergraph complete_graph(int t, int r)
{
    std::vector<Vertex> all(static_cast<std::size_t>(std::max(t, 0)));
    std::iota(all.begin(), all.end(), 0);
    std::vector<Edge> edges;
    for_each_subset(std::span<const Vertex>(all), static_cast<std::size_t>(r),
                    [&](std::span<const Vertex> s) { edges.emplace_back(s.begin(), s.end()); });
    return Hypergraph(r, all.size(), std::move(edges));
}

OracleResult solve(const Hypergraph& host, const ForbiddenFamily& family, const OracleOptions& o, bool exact_allowed,
                   bool complete_host)
{
    const std::size_t m = host.edge_count();
    const FreeSet free(host, family);

    // Edges that are not a member on their own.
    std::vector<EdgeId> singles;
    for (std::size_t id = 0; id < m; ++id) {
        if (!free.conflict({}, static_cast<EdgeId>(id)))
            singles.push_back(static_cast<EdgeId>(id));
    }

    std::vector<EdgeId> best;
    if (singles.size() == m && !contains_member(host, family)) {
        OracleResult all{m, host, true, 0};
        return all;
    }
    const int restarts = exact_allowed ? 1 : std::max(1, o.restarts);
    for (int i = 0; i < restarts; ++i) {
        Rng stream = Rng::stream(o.seed, static_cast<std::uint64_t>(i));
        auto s = greedy_local_search(host, free, stream);
        if (s.size() > best.size())
            best = std::move(s);
    }

    OracleResult result;
    if (exact_allowed) {
        std::vector<std::size_t> weight(m, 0);
        for (std::size_t id = 0; id < m; ++id) {
            for (Vertex v : host.edge(static_cast<EdgeId>(id)))
                weight[id] += host.degree(v);
        }
        std::stable_sort(singles.begin(), singles.end(), [&](EdgeId a, EdgeId b) { return weight[a] > weight[b]; });
        BranchAndBound bb(free, o.budget);
        std::vector<EdgeId> start;
        std::vector<EdgeId> candidates = singles;
        if (complete_host && std::find(singles.begin(), singles.end(), EdgeId{0}) != singles.end()) {
            // Any nonempty free subgraph of a complete host can be relabelled to contain edge 0.
            start.push_back(0);
            std::vector<EdgeId> next;
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                if (candidates[i] != 0 && !free.conflict(start, candidates[i]))
                    next.push_back(candidates[i]);
            }
            candidates = std::move(next);
        }
        result.proved_exact = bb.run(start, candidates, best);
        result.nodes = bb.nodes();
        best = bb.best();
    }
    std::sort(best.begin(), best.end());
    result.witness = host.subgraph(best);
    result.optimum = best.size();
    if (!family.is_empty() && contains_member(result.witness, family))
        throw VerificationError("oracle witness is not family-free");
    return result;
}

std::uint64_t fnv1a(const std::string& text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

json result_to_json(const OracleResult& r)
{
    return json{{"optimum", r.optimum},
                {"proved_exact", r.proved_exact},
                {"nodes", r.nodes},
                {"r", r.witness.uniformity()},
                {"n", r.witness.vertex_count()},
                {"edges", r.witness.edge_list()}};
}

OracleResult result_from_json(const json& j)
{
    OracleResult r;
    r.optimum = j.at("optimum").get<std::size_t>();
    r.proved_exact = j.at("proved_exact").get<bool>();
    r.nodes = j.at("nodes").get<std::uint64_t>();
    r.witness = Hypergraph(j.at("r").get<int>(), j.at("n").get<std::size_t>(), j.at("edges").get<std::vector<Edge>>());
    return r;
}

} // namespace

std::string host_key(const Hypergraph& host)
{
    std::ostringstream out;
    out << "hg:" << host.uniformity() << ',' << host.vertex_count() << ',' << host.edge_count() << ',' << std::hex
        << fnv1a(format_hg(host));
    return out.str();
}

OracleResult ex_relative(const Hypergraph& host, const ForbiddenFamily& family, const OracleOptions& options)
{
    const std::string fam = family.to_string();
    const std::string hk = host_key(host);
    if (auto hit = recall(exact_key(fam, hk), options))
        return *hit;
    // Complete hosts get the classical ceiling and its symmetry breaking.
    const bool complete = host.edge_count() > 0 &&
                          host.edge_count() == binomial(host.vertex_count(), static_cast<std::uint64_t>(host.uniformity()));
    const bool exact = host.edge_count() <= (complete ? options.classical_edge_ceiling : options.exact_edge_ceiling);
    if (!exact) {
        if (auto hit = recall(inexact_key(fam, hk, options), options))
            return *hit;
    }
    OracleResult r = solve(host, family, options, exact, complete);
    remember(r.proved_exact ? exact_key(fam, hk) : inexact_key(fam, hk, options), r, options);
    return r;
}

OracleResult ex_classical(int t, int r, const ForbiddenFamily& family, const OracleOptions& options)
{
    if (r < 1)
        throw InputError("uniformity must be positive");
    if (t < 0)
        throw InputError("vertex count must be nonnegative");
    const std::string fam = family.to_string();
    const std::string hk = "complete:" + std::to_string(t) + "," + std::to_string(r);
    if (auto hit = recall(exact_key(fam, hk), options))
        return *hit;
    if (t < r) {
        OracleResult empty{0, Hypergraph(r, static_cast<std::size_t>(t)), true, 0};
        return empty;
    }
    const bool exact = binomial(static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(r)) <= options.classical_edge_ceiling;
    if (!exact) {
        if (auto hit = recall(inexact_key(fam, hk, options), options))
            return *hit;
    }
    OracleResult res = solve(complete_graph(t, r), family, options, exact, true);
    remember(res.proved_exact ? exact_key(fam, hk) : inexact_key(fam, hk, options), res, options);
    return res;
}

Hypergraph extremal_target(int t, int r, const ForbiddenFamily& family, const OracleOptions& options)
{
    return ex_classical(t, r, family, options).witness;
}

OracleCache::OracleCache(std::string path) : path_(std::move(path))
{
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        try {
            auto j = json::parse(line);
            entries_[j.at("key").get<std::string>()] = result_from_json(j.at("result"));
        } catch (const std::exception&) {
            // A torn final line from an interrupted writer; skip it.
        }
    }
}

std::optional<std::string> OracleCache::path_from_env()
{
    if (const char* p = std::getenv("RELTURAN_CACHE"); p && *p)
        return std::string(p);
    return std::nullopt;
}

std::optional<OracleResult> OracleCache::lookup(const std::string& key) const
{
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end())
        return std::nullopt;
    return it->second;
}

void OracleCache::store(const std::string& key, const OracleResult& result)
{
    std::lock_guard lock(mutex_);
    entries_[key] = result;
    std::ofstream out(path_, std::ios::app);
    if (!out)
        throw ResourceError("cannot append to oracle cache " + path_);
    out << json{{"key", key}, {"result", result_to_json(result)}}.dump() << '\n';
}

} // namespace relturan
