#include "relturan/hypergraph.hpp"

#include "relturan/error.hpp"
#include "relturan/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

namespace relturan {

namespace {

void check_edge(int r, std::size_t n, Edge& e)
{
    if (static_cast<int>(e.size()) != r)
        throw InputError("edge has " + std::to_string(e.size()) + " vertices, expected " + std::to_string(r));
    std::sort(e.begin(), e.end());
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] >= n)
            throw InputError("vertex id " + std::to_string(e[i]) + " out of range (n = " + std::to_string(n) + ")");
        if (i > 0 && e[i] == e[i - 1])
            throw InputError("edge repeats vertex " + std::to_string(e[i]));
    }
}

} // namespace

Hypergraph::Hypergraph(int r, std::size_t n) : r_(r), n_(n)
{
    if (r < 1)
        throw InputError("uniformity must be positive");
    build_indices();
}

Hypergraph::Hypergraph(int r, std::size_t n, std::vector<Edge> edges) : r_(r), n_(n)
{
    if (r < 1)
        throw InputError("uniformity must be positive");
    edges_.reserve(edges.size() * static_cast<std::size_t>(r));
    for (auto& e : edges) {
        check_edge(r, n, e);
        edges_.insert(edges_.end(), e.begin(), e.end());
    }
    build_indices();
    for (std::size_t i = 1; i < lex_order_.size(); ++i) {
        if (std::ranges::equal(edge(lex_order_[i - 1]), edge(lex_order_[i])))
            throw InputError("duplicate edge");
    }
}

Hypergraph Hypergraph::from_edge_set(int r, std::size_t n, std::vector<Edge> edges)
{
    for (auto& e : edges)
        check_edge(r, n, e);
    std::vector<Edge> unique;
    unique.reserve(edges.size());
    std::vector<std::size_t> order(edges.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return edges[a] < edges[b]; });
    std::vector<char> keep(edges.size(), 0);
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i == 0 || edges[order[i]] != edges[order[i - 1]])
            keep[order[i]] = 1;
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (keep[i])
            unique.push_back(std::move(edges[i]));
    }
    return Hypergraph(r, n, std::move(unique));
}

void Hypergraph::build_indices()
{
    const std::size_t m = edge_count();
    offsets_.assign(n_ + 1, 0);
    for (Vertex v : edges_)
        ++offsets_[v + 1];
    for (std::size_t v = 0; v < n_; ++v)
        offsets_[v + 1] += offsets_[v];
    incidence_.assign(edges_.size(), 0);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t id = 0; id < m; ++id) {
        for (Vertex v : edge(static_cast<EdgeId>(id)))
            incidence_[fill[v]++] = static_cast<EdgeId>(id);
    }
    lex_order_.resize(m);
    std::iota(lex_order_.begin(), lex_order_.end(), EdgeId{0});
    std::sort(lex_order_.begin(), lex_order_.end(), [&](EdgeId a, EdgeId b) {
        return std::ranges::lexicographical_compare(edge(a), edge(b));
    });
}

std::optional<EdgeId> Hypergraph::find_edge(std::span<const Vertex> vertices) const
{
    if (static_cast<int>(vertices.size()) != r_)
        return std::nullopt;
    auto it = std::lower_bound(lex_order_.begin(), lex_order_.end(), vertices, [&](EdgeId id, std::span<const Vertex> key) {
        return std::ranges::lexicographical_compare(edge(id), key);
    });
    if (it != lex_order_.end() && std::ranges::equal(edge(*it), vertices))
        return *it;
    return std::nullopt;
}

bool Hypergraph::edge_contains(EdgeId id, Vertex v) const
{
    auto e = edge(id);
    return std::binary_search(e.begin(), e.end(), v);
}

std::vector<Edge> Hypergraph::edge_list() const
{
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (std::size_t id = 0; id < edge_count(); ++id) {
        auto e = edge(static_cast<EdgeId>(id));
        out.emplace_back(e.begin(), e.end());
    }
    return out;
}

Hypergraph Hypergraph::subgraph(std::span<const EdgeId> ids) const
{
    Hypergraph out;
    out.r_ = r_;
    out.n_ = n_;
    out.edges_.reserve(ids.size() * static_cast<std::size_t>(r_));
    for (EdgeId id : ids) {
        auto e = edge(id);
        out.edges_.insert(out.edges_.end(), e.begin(), e.end());
    }
    out.build_indices();
    return out;
}

bool Hypergraph::same_edge_set(const Hypergraph& other) const
{
    if (r_ != other.r_ || edge_count() != other.edge_count())
        return false;
    for (std::size_t i = 0; i < lex_order_.size(); ++i) {
        if (!std::ranges::equal(edge(lex_order_[i]), other.edge(other.lex_order_[i])))
            return false;
    }
    return true;
}

bool Hypergraph::is_subgraph_of(const Hypergraph& other) const
{
    if (r_ != other.r_ && !empty())
        return false;
    for (std::size_t id = 0; id < edge_count(); ++id) {
        if (!other.has_edge(edge(static_cast<EdgeId>(id))))
            return false;
    }
    return true;
}

std::vector<Vertex> Partition::members(int part) const
{
    std::vector<Vertex> out;
    for (std::size_t v = 0; v < part_of.size(); ++v) {
        if (part_of[v] == part)
            out.push_back(static_cast<Vertex>(v));
    }
    return out;
}

bool Partition::is_transversal(std::span<const Vertex> edge) const
{
    if (static_cast<int>(edge.size()) != part_count)
        return false;
    std::uint64_t seen = 0;
    for (Vertex v : edge) {
        if (v >= part_of.size())
            return false;
        const int p = part_of[v];
        if (p < 0 || p >= part_count || (seen >> p) & 1U)
            return false;
        seen |= std::uint64_t{1} << p;
    }
    return true;
}

bool Partition::is_r_partition_of(const Hypergraph& h) const
{
    if (part_count != h.uniformity() || part_of.size() != h.vertex_count())
        return false;
    for (int p : part_of) {
        if (p < 0 || p >= part_count)
            return false;
    }
    for (std::size_t id = 0; id < h.edge_count(); ++id) {
        if (!is_transversal(h.edge(static_cast<EdgeId>(id))))
            return false;
    }
    return true;
}

Partition Partition::reordered(std::span<const int> order) const
{
    std::vector<int> new_index(static_cast<std::size_t>(part_count), -1);
    for (std::size_t i = 0; i < order.size(); ++i)
        new_index[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    Partition out{part_of, part_count};
    for (auto& p : out.part_of)
        p = new_index[static_cast<std::size_t>(p)];
    return out;
}

KSetDegrees::KSetDegrees(const Hypergraph& h, int k) : k_(k)
{
    bits_ = std::max(1, static_cast<int>(std::bit_width(h.vertex_count())));
    packed_ = k * bits_ <= 64;
    if (k < 1 || k > h.uniformity())
        return;
    std::vector<Vertex> scratch;
    for (std::size_t id = 0; id < h.edge_count(); ++id) {
        auto e = h.edge(static_cast<EdgeId>(id));
        for_each_subset<Vertex>(e, static_cast<std::size_t>(k), [&](std::span<const Vertex> s) {
            std::uint32_t count;
            if (packed_)
                count = ++packed_counts_[pack(s)];
            else
                count = ++wide_counts_[std::vector<Vertex>(s.begin(), s.end())];
            max_ = std::max<std::size_t>(max_, count);
        });
    }
}

std::uint64_t KSetDegrees::pack(std::span<const Vertex> s) const
{
    std::uint64_t key = 0;
    for (Vertex v : s)
        key = (key << bits_) | (v + 1);
    return key;
}

std::size_t KSetDegrees::degree(std::span<const Vertex> s) const
{
    if (static_cast<int>(s.size()) != k_)
        return 0;
    if (packed_) {
        auto it = packed_counts_.find(pack(s));
        return it == packed_counts_.end() ? 0 : it->second;
    }
    auto it = wide_counts_.find(std::vector<Vertex>(s.begin(), s.end()));
    return it == wide_counts_.end() ? 0 : it->second;
}

std::size_t k_degree(const Hypergraph& h, std::span<const Vertex> s)
{
    if (s.empty() || static_cast<int>(s.size()) >= h.uniformity())
        throw InputError("k-degree needs 1 <= |S| < r");
    std::vector<Vertex> sorted(s.begin(), s.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] >= h.vertex_count())
            throw InputError("vertex id " + std::to_string(sorted[i]) + " out of range");
        if (i > 0 && sorted[i] == sorted[i - 1])
            throw InputError("vertex set repeats a vertex");
    }
    std::size_t count = 0;
    for (EdgeId id : h.incident(sorted.front())) {
        auto e = h.edge(id);
        if (std::includes(e.begin(), e.end(), sorted.begin(), sorted.end()))
            ++count;
    }
    return count;
}

std::size_t max_k_degree(const Hypergraph& h, int k)
{
    if (k == 1) {
        std::size_t best = 0;
        for (std::size_t v = 0; v < h.vertex_count(); ++v)
            best = std::max(best, h.degree(static_cast<Vertex>(v)));
        return best;
    }
    return KSetDegrees(h, k).max_degree();
}

DegreeProfile degree_profile(const Hypergraph& h)
{
    DegreeProfile profile;
    const int r = h.uniformity();
    profile.max_k_degree.assign(static_cast<std::size_t>(std::max(r, 1)), 0);
    for (int k = 1; k < r; ++k)
        profile.max_k_degree[static_cast<std::size_t>(k)] = max_k_degree(h, k);
    profile.max_degree = r >= 2 ? profile.max_k_degree[1] : max_k_degree(h, 1);
    return profile;
}

std::size_t transversal_count(const Hypergraph& h, const Partition& p)
{
    std::size_t count = 0;
    for (std::size_t id = 0; id < h.edge_count(); ++id)
        count += p.is_transversal(h.edge(static_cast<EdgeId>(id))) ? 1 : 0;
    return count;
}

namespace {

// Change in transversal count if v moves to part `to`.
long move_gain(const Hypergraph& h, Partition& p, Vertex v, int to)
{
    const int from = p.part_of[v];
    long before = 0;
    for (EdgeId id : h.incident(v))
        before += p.is_transversal(h.edge(id)) ? 1 : 0;
    p.part_of[v] = to;
    long after = 0;
    for (EdgeId id : h.incident(v))
        after += p.is_transversal(h.edge(id)) ? 1 : 0;
    p.part_of[v] = from;
    return after - before;
}

} // namespace

PartiteReduction partite_reduce(const Hypergraph& h, std::uint64_t seed, const std::optional<Partition>& hint)
{
    const int r = h.uniformity();
    const std::size_t n = h.vertex_count();
    PartiteReduction result;
    Partition best{std::vector<int>(n, 0), r};
    std::size_t best_count = 0;
    bool have = false;

    if (hint && hint->part_count == r && hint->part_of.size() == n) {
        best = *hint;
        best_count = transversal_count(h, best);
        have = true;
    }
    const double bound = std::pow(static_cast<double>(r), -static_cast<double>(r)) * static_cast<double>(h.edge_count());
    constexpr int kMaxAttempts = 64;
    for (int attempt = 0; attempt < kMaxAttempts && best_count < h.edge_count(); ++attempt) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(attempt));
        Partition candidate{std::vector<int>(n), r};
        for (auto& part : candidate.part_of)
            part = static_cast<int>(rng.below(static_cast<std::uint64_t>(r)));
        const std::size_t count = transversal_count(h, candidate);
        ++result.attempts;
        if (!have || count > best_count) {
            best = std::move(candidate);
            best_count = count;
            have = true;
        }
    }

    // Single-vertex moves strictly increase the count, so this terminates.
    bool improved = true;
    while (improved && best_count < h.edge_count()) {
        improved = false;
        for (std::size_t v = 0; v < n; ++v) {
            for (int to = 0; to < r; ++to) {
                if (to == best.part_of[v])
                    continue;
                const long gain = move_gain(h, best, static_cast<Vertex>(v), to);
                if (gain > 0) {
                    best.part_of[v] = to;
                    best_count += static_cast<std::size_t>(gain);
                    ++result.moves;
                    improved = true;
                }
            }
        }
    }
    if (static_cast<double>(best_count) < bound)
        throw VerificationError("partite reduction fell below the r^-r bound");

    std::vector<EdgeId> kept;
    for (std::size_t id = 0; id < h.edge_count(); ++id) {
        if (best.is_transversal(h.edge(static_cast<EdgeId>(id))))
            kept.push_back(static_cast<EdgeId>(id));
    }
    result.partition = std::move(best);
    result.subgraph = h.subgraph(kept);
    return result;
}

Hypergraph induced_k_graph(const Hypergraph& h, const Partition& p, std::span<const int> parts)
{
    if (!p.is_r_partition_of(h))
        throw InputError("induced k-graph needs a valid r-partition");
    if (parts.empty())
        throw InputError("index set must be nonempty");
    std::uint64_t mask = 0;
    for (int part : parts) {
        if (part < 0 || part >= p.part_count)
            throw InputError("part index out of range");
        mask |= std::uint64_t{1} << part;
    }
    const int k = std::popcount(mask);
    std::vector<Edge> projected;
    projected.reserve(h.edge_count());
    for (std::size_t id = 0; id < h.edge_count(); ++id) {
        Edge e;
        for (Vertex v : h.edge(static_cast<EdgeId>(id))) {
            if ((mask >> p.part_of[v]) & 1U)
                e.push_back(v);
        }
        projected.push_back(std::move(e));
    }
    return Hypergraph::from_edge_set(k, h.vertex_count(), std::move(projected));
}

Matching greedy_matching(const Hypergraph& h)
{
    Matching m;
    std::vector<char> used(h.vertex_count(), 0);
    for (std::size_t id = 0; id < h.edge_count(); ++id) {
        auto e = h.edge(static_cast<EdgeId>(id));
        if (std::ranges::any_of(e, [&](Vertex v) { return used[v] != 0; }))
            continue;
        for (Vertex v : e)
            used[v] = 1;
        m.edges.push_back(static_cast<EdgeId>(id));
    }
    return m;
}

Hypergraph linear_subgraph(const Hypergraph& h)
{
    std::vector<EdgeId> kept;
    std::vector<std::vector<Vertex>> covered(h.vertex_count());
    for (std::size_t id = 0; id < h.edge_count(); ++id) {
        auto e = h.edge(static_cast<EdgeId>(id));
        bool conflict = false;
        for (std::size_t i = 0; i < e.size() && !conflict; ++i) {
            for (std::size_t j = i + 1; j < e.size() && !conflict; ++j)
                conflict = std::ranges::find(covered[e[i]], e[j]) != covered[e[i]].end();
        }
        if (conflict)
            continue;
        for (std::size_t i = 0; i < e.size(); ++i) {
            for (std::size_t j = i + 1; j < e.size(); ++j)
                covered[e[i]].push_back(e[j]);
        }
        kept.push_back(static_cast<EdgeId>(id));
    }
    return h.subgraph(kept);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k)
{
    if (k > n)
        return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i)
        result = result * (n - k + i) / i;
    return result;
}

std::vector<Vertex> intersect(std::span<const Vertex> a, std::span<const Vertex> b)
{
    std::vector<Vertex> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::size_t intersection_size(std::span<const Vertex> a, std::span<const Vertex> b)
{
    std::size_t count = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j)
            ++i;
        else if (*j < *i)
            ++j;
        else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

} // namespace relturan
