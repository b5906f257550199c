#include "relturan/detectors.hpp"

#include "relturan/canonical.hpp"
#include "relturan/error.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <set>

namespace relturan {

namespace {

constexpr int kUnreached = std::numeric_limits<int>::max() / 2;

// BFS distances from `source` in the 2-section, only through vertices >= floor
// and never through `skip_edge`.
std::vector<int> shadow_distances(const Hypergraph& h, Vertex source, Vertex floor, std::optional<EdgeId> skip_edge)
{
    std::vector<int> dist(h.vertex_count(), kUnreached);
    std::deque<Vertex> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
        Vertex u = queue.front();
        queue.pop_front();
        for (EdgeId id : h.incident(u)) {
            if (skip_edge && id == *skip_edge)
                continue;
            for (Vertex w : h.edge(id)) {
                if (w >= floor && dist[w] == kUnreached) {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    return dist;
}

class BergeSearch {
public:
    BergeSearch(const Hypergraph& h, int ell, const BergeOptions& options, const BergeVisitor& visit)
        : h_(h), ell_(ell), options_(options), visit_(visit), used_edge_(h.edge_count(), 0),
          used_vertex_(h.vertex_count(), 0)
    {
    }

    void run()
    {
        if (ell_ < 2 || static_cast<std::size_t>(ell_) > h_.edge_count())
            return;
        if (options_.through_edge)
            run_through(*options_.through_edge);
        else
            run_free();
    }

private:
    bool emit()
    {
        if (options_.forbid_sunflower && sunflower_kernel(h_, cycle_.edges))
            return true;
        return visit_(cycle_);
    }

    void run_free()
    {
        for (std::size_t v = 0; v < h_.vertex_count() && !stop_; ++v) {
            const auto start = static_cast<Vertex>(v);
            if (h_.degree(start) < 2)
                continue;
            dist_ = shadow_distances(h_, start, start, std::nullopt);
            cycle_.core.assign(1, start);
            cycle_.edges.clear();
            used_vertex_[start] = 1;
            extend_free(start);
            used_vertex_[start] = 0;
        }
    }

    void extend_free(Vertex current)
    {
        const auto placed = static_cast<int>(cycle_.core.size());
        const Vertex start = cycle_.core.front();
        for (EdgeId id : h_.incident(current)) {
            if (stop_)
                return;
            if (used_edge_[id])
                continue;
            if (placed == ell_) {
                if (!h_.edge_contains(id, start))
                    continue;
                cycle_.edges.push_back(id);
                if (!emit())
                    stop_ = true;
                cycle_.edges.pop_back();
                continue;
            }
            used_edge_[id] = 1;
            cycle_.edges.push_back(id);
            for (Vertex w : h_.edge(id)) {
                if (w <= start || used_vertex_[w] || dist_[w] > ell_ - placed)
                    continue;
                used_vertex_[w] = 1;
                cycle_.core.push_back(w);
                extend_free(w);
                cycle_.core.pop_back();
                used_vertex_[w] = 0;
                if (stop_)
                    break;
            }
            cycle_.edges.pop_back();
            used_edge_[id] = 0;
        }
    }

    void run_through(EdgeId closing)
    {
        if (closing >= h_.edge_count())
            throw InputError("through edge id out of range");
        used_edge_[closing] = 1;
        auto e = h_.edge(closing);
        for (Vertex first : e) {
            for (Vertex last : e) {
                if (first == last || stop_)
                    continue;
                dist_ = shadow_distances(h_, last, 0, closing);
                last_ = last;
                cycle_.core.assign(1, first);
                cycle_.edges.clear();
                used_vertex_[first] = 1;
                used_vertex_[last] = 1;
                extend_through(first);
                used_vertex_[first] = 0;
                used_vertex_[last] = 0;
            }
        }
        used_edge_[closing] = 0;
    }

    void extend_through(Vertex current)
    {
        const auto placed = static_cast<int>(cycle_.core.size());
        for (EdgeId id : h_.incident(current)) {
            if (stop_)
                return;
            if (used_edge_[id])
                continue;
            if (placed == ell_ - 1) {
                if (!h_.edge_contains(id, last_))
                    continue;
                cycle_.edges.push_back(id);
                cycle_.edges.push_back(*options_.through_edge);
                cycle_.core.push_back(last_);
                if (!emit())
                    stop_ = true;
                cycle_.core.pop_back();
                cycle_.edges.pop_back();
                cycle_.edges.pop_back();
                continue;
            }
            used_edge_[id] = 1;
            cycle_.edges.push_back(id);
            for (Vertex w : h_.edge(id)) {
                if (used_vertex_[w] || dist_[w] > ell_ - 1 - placed)
                    continue;
                used_vertex_[w] = 1;
                cycle_.core.push_back(w);
                extend_through(w);
                cycle_.core.pop_back();
                used_vertex_[w] = 0;
                if (stop_)
                    break;
            }
            cycle_.edges.pop_back();
            used_edge_[id] = 0;
        }
    }

    const Hypergraph& h_;
    int ell_;
    const BergeOptions& options_;
    const BergeVisitor& visit_;
    std::vector<char> used_edge_;
    std::vector<char> used_vertex_;
    std::vector<int> dist_;
    Vertex last_ = 0;
    BergeCycle cycle_;
    bool stop_ = false;
};

std::optional<SunflowerKernel> kernel_of(const std::vector<std::span<const Vertex>>& edges)
{
    if (edges.empty())
        return std::nullopt;
    if (edges.size() == 1)
        return SunflowerKernel{{}, true};
    auto kernel = intersect(edges[0], edges[1]);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            if (i == 0 && j == 1)
                continue;
            if (intersect(edges[i], edges[j]) != kernel)
                return std::nullopt;
        }
    }
    return SunflowerKernel{std::move(kernel), false};
}

bool meets(std::span<const Vertex> a, std::span<const Vertex> b) { return intersection_size(a, b) > 0; }

// Checks the triple condition; a and b are the petals, c the extra edge.
std::optional<SunflowerPlus> triple(const Hypergraph& h, EdgeId a, EdgeId b, EdgeId c)
{
    auto kernel = intersect(h.edge(a), h.edge(b));
    if (kernel.empty() || !meets(h.edge(c), kernel))
        return std::nullopt;
    if (intersect(h.edge(c), h.edge(a)) == kernel && intersect(h.edge(c), h.edge(b)) == kernel)
        return std::nullopt;
    return SunflowerPlus{c, {a, b}, std::move(kernel)};
}

} // namespace

void for_each_berge_cycle(const Hypergraph& h, int ell, const BergeOptions& options, const BergeVisitor& visit)
{
    if (ell < 2)
        throw InputError("Berge cycles need length >= 2");
    BergeSearch(h, ell, options, visit).run();
}

std::optional<BergeCycle> find_berge_cycle(const Hypergraph& h, int ell, const BergeOptions& options)
{
    std::optional<BergeCycle> found;
    for_each_berge_cycle(h, ell, options, [&](const BergeCycle& c) {
        found = c;
        return false;
    });
    return found;
}

std::optional<int> girth(const Hypergraph& h, int max_ell)
{
    if (max_ell < 2)
        throw InputError("girth bound must be >= 2");
    for (int ell = 2; ell <= max_ell; ++ell) {
        if (find_berge_cycle(h, ell))
            return ell;
    }
    return std::nullopt;
}

std::optional<SunflowerKernel> is_sunflower(const Hypergraph& f)
{
    if (f.edge_count() == 0)
        throw InputError("sunflower test needs at least one edge");
    std::vector<std::span<const Vertex>> edges;
    for (std::size_t id = 0; id < f.edge_count(); ++id)
        edges.push_back(f.edge(static_cast<EdgeId>(id)));
    return kernel_of(edges);
}

std::optional<SunflowerKernel> sunflower_kernel(const Hypergraph& h, std::span<const EdgeId> ids)
{
    std::vector<std::span<const Vertex>> edges;
    for (EdgeId id : ids)
        edges.push_back(h.edge(id));
    return kernel_of(edges);
}

std::optional<SunflowerPlus> is_sunflower_plus(const Hypergraph& f, int ell, bool allow_single_petal)
{
    if (ell < 2)
        throw InputError("sunflower-plus needs ell >= 2");
    const std::size_t m = f.edge_count();
    if (m < 2 || is_sunflower(f))
        return std::nullopt;
    const std::size_t petals = m - 1;
    const std::size_t min_petals = allow_single_petal ? 1 : 2;
    if (petals < min_petals || petals > static_cast<std::size_t>(ell))
        return std::nullopt;
    for (std::size_t extra = 0; extra < m; ++extra) {
        std::vector<EdgeId> rest;
        for (std::size_t id = 0; id < m; ++id) {
            if (id != extra)
                rest.push_back(static_cast<EdgeId>(id));
        }
        auto kernel = sunflower_kernel(f, rest);
        if (!kernel)
            continue;
        std::vector<Vertex> k = kernel->kernel;
        if (kernel->unconstrained)
            k = intersect(f.edge(rest.front()), f.edge(static_cast<EdgeId>(extra)));
        if (!meets(f.edge(static_cast<EdgeId>(extra)), k))
            continue;
        return SunflowerPlus{static_cast<EdgeId>(extra), std::move(rest), std::move(k)};
    }
    return std::nullopt;
}

void for_each_sunflower_plus(const Hypergraph& h, std::optional<EdgeId> through,
                             const std::function<bool(const SunflowerPlus&)>& visit)
{
    const std::size_t m = h.edge_count();
    auto report = [&](EdgeId a, EdgeId b, EdgeId c) {
        if (a == b || a == c || b == c)
            return true;
        if (auto w = triple(h, a, b, c))
            return visit(*w);
        return true;
    };
    if (through) {
        const EdgeId t = *through;
        if (t >= m)
            throw InputError("through edge id out of range");
        // t as the extra edge: petals share a vertex of t.
        for (Vertex y : h.edge(t)) {
            auto inc = h.incident(y);
            for (std::size_t i = 0; i < inc.size(); ++i) {
                for (std::size_t j = i + 1; j < inc.size(); ++j) {
                    if (!report(inc[i], inc[j], t))
                        return;
                }
            }
        }
        // t as a petal.
        for (Vertex x : h.edge(t)) {
            for (EdgeId b : h.incident(x)) {
                if (b == t)
                    continue;
                auto kernel = intersect(h.edge(t), h.edge(b));
                if (kernel.front() != x)
                    continue;
                for (Vertex y : kernel) {
                    for (EdgeId c : h.incident(y)) {
                        if (!report(t, b, c))
                            return;
                    }
                }
            }
        }
        return;
    }
    for (std::size_t ai = 0; ai < m; ++ai) {
        const auto a = static_cast<EdgeId>(ai);
        for (Vertex x : h.edge(a)) {
            for (EdgeId b : h.incident(x)) {
                if (b <= a)
                    continue;
                auto kernel = intersect(h.edge(a), h.edge(b));
                if (kernel.front() != x)
                    continue;
                for (Vertex y : kernel) {
                    for (EdgeId c : h.incident(y)) {
                        if (c == a || c == b)
                            continue;
                        auto ck = intersect(h.edge(c), kernel);
                        if (ck.front() != y)
                            continue;
                        if (!report(a, b, c))
                            return;
                    }
                }
            }
        }
    }
}

std::optional<SunflowerPlus> find_sunflower_plus(const Hypergraph& h, std::optional<EdgeId> through)
{
    std::optional<SunflowerPlus> found;
    for_each_sunflower_plus(h, through, [&](const SunflowerPlus& w) {
        found = w;
        return false;
    });
    return found;
}

namespace {

class EmbeddingSearch {
public:
    EmbeddingSearch(const Hypergraph& pattern, const Hypergraph& host, const std::function<bool(const Embedding&)>& visit)
        : p_(pattern), h_(host), visit_(visit)
    {
        constexpr Vertex kUnmapped = ~Vertex{0};
        map_.vertex_map.assign(p_.vertex_count(), kUnmapped);
        map_.edge_map.assign(p_.edge_count(), 0);
        used_host_.assign(h_.vertex_count(), 0);
    }

    void run(std::optional<EdgeId> through)
    {
        if (p_.uniformity() != h_.uniformity() || p_.edge_count() > h_.edge_count() || p_.edge_count() == 0)
            return;
        if (!through) {
            order_edges(0);
            match(0);
            return;
        }
        for (std::size_t first = 0; first < p_.edge_count() && !stop_; ++first) {
            order_edges(static_cast<EdgeId>(first));
            forced_ = through;
            match(0);
            forced_.reset();
        }
    }

private:
    static constexpr Vertex kUnmapped = ~Vertex{0};

    void order_edges(EdgeId first)
    {
        const std::size_t m = p_.edge_count();
        order_.assign(1, first);
        std::vector<char> placed(m, 0);
        std::vector<char> seen(p_.vertex_count(), 0);
        placed[first] = 1;
        for (Vertex v : p_.edge(first))
            seen[v] = 1;
        while (order_.size() < m) {
            std::optional<EdgeId> pick;
            std::size_t best_overlap = 0;
            for (std::size_t id = 0; id < m; ++id) {
                if (placed[id])
                    continue;
                std::size_t overlap = 0;
                for (Vertex v : p_.edge(static_cast<EdgeId>(id)))
                    overlap += seen[v];
                if (!pick || overlap > best_overlap) {
                    pick = static_cast<EdgeId>(id);
                    best_overlap = overlap;
                }
            }
            placed[*pick] = 1;
            for (Vertex v : p_.edge(*pick))
                seen[v] = 1;
            order_.push_back(*pick);
        }
    }

    void match(std::size_t step)
    {
        if (stop_)
            return;
        if (step == order_.size()) {
            if (!visit_(map_))
                stop_ = true;
            return;
        }
        const EdgeId pe = order_[step];
        std::vector<Vertex> mapped_images;
        std::vector<Vertex> unmapped;
        for (Vertex v : p_.edge(pe)) {
            if (map_.vertex_map[v] != kUnmapped)
                mapped_images.push_back(map_.vertex_map[v]);
            else
                unmapped.push_back(v);
        }
        std::sort(mapped_images.begin(), mapped_images.end());

        auto try_host_edge = [&](EdgeId he) {
            auto e = h_.edge(he);
            if (!std::includes(e.begin(), e.end(), mapped_images.begin(), mapped_images.end()))
                return;
            std::vector<Vertex> free;
            for (Vertex w : e) {
                if (!std::binary_search(mapped_images.begin(), mapped_images.end(), w)) {
                    if (used_host_[w])
                        return;
                    free.push_back(w);
                }
            }
            map_.edge_map[pe] = he;
            // free is sorted; walk all assignments of unmapped -> free.
            do {
                for (std::size_t i = 0; i < unmapped.size(); ++i) {
                    map_.vertex_map[unmapped[i]] = free[i];
                    used_host_[free[i]] = 1;
                }
                match(step + 1);
                for (std::size_t i = 0; i < unmapped.size(); ++i) {
                    map_.vertex_map[unmapped[i]] = kUnmapped;
                    used_host_[free[i]] = 0;
                }
            } while (!stop_ && std::next_permutation(free.begin(), free.end()));
        };

        if (step == 0 && forced_) {
            try_host_edge(*forced_);
            return;
        }
        if (!mapped_images.empty()) {
            for (EdgeId he : h_.incident(mapped_images.front())) {
                try_host_edge(he);
                if (stop_)
                    return;
            }
            return;
        }
        for (std::size_t he = 0; he < h_.edge_count() && !stop_; ++he)
            try_host_edge(static_cast<EdgeId>(he));
    }

    const Hypergraph& p_;
    const Hypergraph& h_;
    const std::function<bool(const Embedding&)>& visit_;
    Embedding map_;
    std::vector<char> used_host_;
    std::vector<EdgeId> order_;
    std::optional<EdgeId> forced_;
    bool stop_ = false;
};

} // namespace

void for_each_embedding(const Hypergraph& pattern, const Hypergraph& host, std::optional<EdgeId> through,
                        const std::function<bool(const Embedding&)>& visit)
{
    if (through && *through >= host.edge_count())
        throw InputError("through edge id out of range");
    EmbeddingSearch(pattern, host, visit).run(through);
}

std::optional<Embedding> find_embedding(const Hypergraph& pattern, const Hypergraph& host, std::optional<EdgeId> through)
{
    std::optional<Embedding> found;
    for_each_embedding(pattern, host, through, [&](const Embedding& e) {
        found = e;
        return false;
    });
    return found;
}

std::size_t count_copies(const Hypergraph& pattern, const Hypergraph& host)
{
    std::set<std::vector<EdgeId>> copies;
    for_each_embedding(pattern, host, std::nullopt, [&](const Embedding& e) {
        std::vector<EdgeId> key(e.edge_map);
        std::sort(key.begin(), key.end());
        copies.insert(std::move(key));
        return true;
    });
    return copies.size();
}

Hypergraph loose_cycle(int ell, int r)
{
    if (ell < 3 || r < 2)
        throw InputError("loose cycles need ell >= 3 and r >= 2");
    const auto l = static_cast<Vertex>(ell);
    const auto inner = static_cast<Vertex>(r - 2);
    std::vector<Edge> edges;
    for (Vertex i = 0; i < l; ++i) {
        Edge e{i, (i + 1) % l};
        for (Vertex j = 0; j < inner; ++j)
            e.push_back(l + i * inner + j);
        edges.push_back(std::move(e));
    }
    return Hypergraph(r, l + l * inner, std::move(edges));
}

Hypergraph f5()
{
    return Hypergraph(3, 6, {{0, 1, 2}, {0, 1, 3}, {3, 4, 5}, {2, 4, 5}});
}

Hypergraph f5_variant()
{
    return Hypergraph(3, 6, {{0, 1, 2}, {0, 1, 3}, {0, 4, 2}, {3, 4, 5}});
}

void for_each_loose_cycle(const Hypergraph& h, int ell, std::optional<EdgeId> through,
                          const std::function<bool(std::span<const EdgeId>)>& visit)
{
    if (ell < 3)
        throw InputError("loose cycles need ell >= 3");
    const std::size_t m = h.edge_count();
    if (through && *through >= m)
        throw InputError("through edge id out of range");
    if (static_cast<std::size_t>(ell) > m)
        return;
    std::vector<EdgeId> seq;
    std::vector<Vertex> links; // links[i] = seq[i] ∩ seq[i+1]
    std::vector<char> used(m, 0);
    std::set<std::vector<EdgeId>> seen;
    bool stop = false;

    // Without a through edge, seq[0] is the smallest id and seq[1] < seq.back(),
    // so every copy is produced once. With one, both directions show up and
    // are deduplicated by edge set (the cyclic order is determined by it).
    auto report = [&]() {
        if (through) {
            std::vector<EdgeId> key(seq);
            std::sort(key.begin(), key.end());
            if (!seen.insert(std::move(key)).second)
                return;
        }
        if (!visit(seq))
            stop = true;
    };

    // cand must miss every edge of seq except the last one (and the first when closing).
    auto misses_earlier = [&](EdgeId cand, std::size_t from) {
        for (std::size_t j = from; j + 1 < seq.size(); ++j) {
            if (meets(h.edge(cand), h.edge(seq[j])))
                return false;
        }
        return true;
    };

    std::function<void()> extend = [&]() {
        const EdgeId last = seq.back();
        const bool closing = seq.size() + 1 == static_cast<std::size_t>(ell);
        for (Vertex w : h.edge(last)) {
            if (!links.empty() && w == links.back())
                continue;
            for (EdgeId cand : h.incident(w)) {
                if (stop)
                    return;
                if (used[cand] || intersection_size(h.edge(cand), h.edge(last)) != 1)
                    continue;
                if (!through && cand < seq.front())
                    continue;
                if (!closing) {
                    if (!misses_earlier(cand, 0))
                        continue;
                    used[cand] = 1;
                    seq.push_back(cand);
                    links.push_back(w);
                    extend();
                    links.pop_back();
                    seq.pop_back();
                    used[cand] = 0;
                    continue;
                }
                if (!misses_earlier(cand, 1))
                    continue;
                auto back = intersect(h.edge(cand), h.edge(seq.front()));
                if (back.size() != 1 || back.front() == w ||
                    std::find(links.begin(), links.end(), back.front()) != links.end())
                    continue;
                if (!through && seq[1] > cand)
                    continue;
                seq.push_back(cand);
                report();
                seq.pop_back();
            }
        }
    };

    auto start_from = [&](EdgeId first) {
        seq.assign(1, first);
        links.clear();
        used[first] = 1;
        extend();
        used[first] = 0;
    };
    if (through) {
        start_from(*through);
        return;
    }
    for (std::size_t first = 0; first < m && !stop; ++first)
        start_from(static_cast<EdgeId>(first));
}
Embedding loose_cycle_embedding(const Hypergraph& h, std::span<const EdgeId> cycle)
{
    const int ell = static_cast<int>(cycle.size());
    const int r = h.uniformity();
    const Hypergraph pattern = loose_cycle(ell, r);
    Embedding emb;
    emb.vertex_map.assign(pattern.vertex_count(), 0);
    emb.edge_map.assign(cycle.begin(), cycle.end());
    const auto l = static_cast<std::size_t>(ell);
    for (std::size_t i = 0; i < l; ++i) {
        // connector i = e_{i-1} ∩ e_i
        auto link = intersect(h.edge(cycle[(i + l - 1) % l]), h.edge(cycle[i]));
        emb.vertex_map[i] = link.front();
    }
    for (std::size_t i = 0; i < l; ++i) {
        const Vertex a = emb.vertex_map[i];
        const Vertex b = emb.vertex_map[(i + 1) % l];
        std::size_t j = 0;
        for (Vertex w : h.edge(cycle[i])) {
            if (w == a || w == b)
                continue;
            emb.vertex_map[l + i * static_cast<std::size_t>(r - 2) + j] = w;
            ++j;
        }
    }
    return emb;
}

std::optional<Embedding> contains_loose_cycle(const Hypergraph& h, int ell, std::optional<EdgeId> through)
{
    std::optional<Embedding> found;
    for_each_loose_cycle(h, ell, through, [&](std::span<const EdgeId> cycle) {
        found = loose_cycle_embedding(h, cycle);
        return false;
    });
    return found;
}

std::size_t count_loose_cycles(const Hypergraph& h, int ell)
{
    std::size_t count = 0;
    for_each_loose_cycle(h, ell, std::nullopt, [&](std::span<const EdgeId>) {
        ++count;
        return true;
    });
    return count;
}

std::optional<Embedding> contains_f5(const Hypergraph& h, std::optional<EdgeId> through)
{
    if (h.uniformity() != 3)
        throw InputError("F5 detection needs a 3-graph");
    return find_embedding(f5(), h, through);
}

std::size_t count_f5(const Hypergraph& h)
{
    if (h.uniformity() != 3)
        throw InputError("F5 counting needs a 3-graph");
    return count_copies(f5(), h);
}

std::optional<std::vector<Vertex>> local_isomorphism(const Hypergraph& f, const Hypergraph& target)
{
    if (f.uniformity() != target.uniformity())
        throw InputError("local isomorphism needs equal uniformity");
    const std::size_t n = f.vertex_count();
    const std::size_t m = f.edge_count();
    if (n > 0 && target.vertex_count() == 0)
        return std::nullopt;

    // BFS order over non-isolated vertices.
    std::vector<Vertex> order;
    std::vector<int> position(n, -1);
    for (std::size_t s = 0; s < n; ++s) {
        if (position[s] >= 0 || f.degree(static_cast<Vertex>(s)) == 0)
            continue;
        std::deque<Vertex> queue{static_cast<Vertex>(s)};
        position[s] = static_cast<int>(order.size());
        order.push_back(static_cast<Vertex>(s));
        while (!queue.empty()) {
            Vertex u = queue.front();
            queue.pop_front();
            for (EdgeId id : f.incident(u)) {
                for (Vertex w : f.edge(id)) {
                    if (position[w] < 0) {
                        position[w] = static_cast<int>(order.size());
                        order.push_back(w);
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    std::vector<std::vector<EdgeId>> completes(order.size());
    for (std::size_t id = 0; id < m; ++id) {
        int last = 0;
        for (Vertex v : f.edge(static_cast<EdgeId>(id)))
            last = std::max(last, position[v]);
        completes[static_cast<std::size_t>(last)].push_back(static_cast<EdgeId>(id));
    }
    std::vector<std::vector<EdgeId>> meeting(m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            if (a != b && meets(f.edge(static_cast<EdgeId>(a)), f.edge(static_cast<EdgeId>(b))))
                meeting[a].push_back(static_cast<EdgeId>(b));
        }
    }
    // 2-section neighbourhoods of the target.
    std::vector<std::vector<Vertex>> nbr(target.vertex_count());
    for (std::size_t v = 0; v < target.vertex_count(); ++v) {
        for (EdgeId id : target.incident(static_cast<Vertex>(v))) {
            for (Vertex w : target.edge(id)) {
                if (w != v)
                    nbr[v].push_back(w);
            }
        }
        std::sort(nbr[v].begin(), nbr[v].end());
        nbr[v].erase(std::unique(nbr[v].begin(), nbr[v].end()), nbr[v].end());
    }

    std::vector<Vertex> chi(n, 0);
    std::vector<std::optional<EdgeId>> image(m);
    std::vector<char> done(m, 0);

    std::function<bool(std::size_t)> assign = [&](std::size_t step) -> bool {
        if (step == order.size())
            return true;
        const Vertex v = order[step];
        // Candidates: neighbours of an already-placed co-edge vertex, if any.
        std::optional<Vertex> anchor;
        for (EdgeId id : f.incident(v)) {
            for (Vertex w : f.edge(id)) {
                if (position[w] >= 0 && static_cast<std::size_t>(position[w]) < step) {
                    anchor = w;
                    break;
                }
            }
            if (anchor)
                break;
        }
        std::vector<Vertex> all;
        const std::vector<Vertex>* candidates = nullptr;
        if (anchor) {
            candidates = &nbr[chi[*anchor]];
        } else {
            all.resize(target.vertex_count());
            for (std::size_t i = 0; i < all.size(); ++i)
                all[i] = static_cast<Vertex>(i);
            candidates = &all;
        }
        for (Vertex c : *candidates) {
            chi[v] = c;
            bool ok = true;
            std::vector<EdgeId> finished;
            for (EdgeId id : completes[step]) {
                Edge img;
                for (Vertex w : f.edge(id))
                    img.push_back(chi[w]);
                std::sort(img.begin(), img.end());
                auto hit = target.find_edge(img);
                if (!hit || std::adjacent_find(img.begin(), img.end()) != img.end()) {
                    ok = false;
                    break;
                }
                for (EdgeId other : meeting[id]) {
                    if (done[other] && image[other] == hit) {
                        ok = false;
                        break;
                    }
                }
                if (!ok)
                    break;
                image[id] = hit;
                done[id] = 1;
                finished.push_back(id);
            }
            if (ok && assign(step + 1))
                return true;
            for (EdgeId id : finished) {
                done[id] = 0;
                image[id].reset();
            }
        }
        return false;
    };
    if (!assign(0))
        return std::nullopt;
    return chi;
}

std::vector<Hypergraph> quotient_images(const Hypergraph& f, std::size_t max_vertices)
{
    const Hypergraph g = compact(f);
    const std::size_t n = g.vertex_count();
    const std::size_t m = g.edge_count();
    if (n > max_vertices)
        throw ResourceError("quotient enumeration over " + std::to_string(n) + " vertices exceeds the budget");
    std::vector<std::vector<EdgeId>> completes(n);
    for (std::size_t id = 0; id < m; ++id)
        completes[g.edge(static_cast<EdgeId>(id)).back()].push_back(static_cast<EdgeId>(id));
    std::vector<std::vector<EdgeId>> meeting(m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < a; ++b) {
            if (meets(g.edge(static_cast<EdgeId>(a)), g.edge(static_cast<EdgeId>(b))))
                meeting[a].push_back(static_cast<EdgeId>(b));
        }
    }
    std::vector<Vertex> block(n, 0);
    std::vector<Edge> image(m);
    std::set<std::vector<Edge>> seen;
    std::vector<Hypergraph> out;
    std::function<void(std::size_t, Vertex)> grow = [&](std::size_t v, Vertex blocks) {
        if (v == n) {
            auto h = canonical_form(Hypergraph::from_edge_set(g.uniformity(), blocks, image));
            if (seen.insert(h.edge_list()).second)
                out.push_back(std::move(h));
            return;
        }
        for (Vertex b = 0; b <= blocks; ++b) {
            block[v] = b;
            bool ok = true;
            for (EdgeId id : completes[v]) {
                Edge img;
                for (Vertex w : g.edge(id))
                    img.push_back(block[w]);
                std::sort(img.begin(), img.end());
                if (std::adjacent_find(img.begin(), img.end()) != img.end()) {
                    ok = false;
                    break;
                }
                image[id] = std::move(img);
            }
            if (ok) {
                for (EdgeId id : completes[v]) {
                    for (EdgeId other : meeting[id]) {
                        if (g.edge(other).back() <= v && image[other] == image[id]) {
                            ok = false;
                            break;
                        }
                    }
                    // Also compare with edges completing at this same vertex.
                    if (!ok)
                        break;
                }
            }
            if (ok)
                grow(v + 1, std::max<Vertex>(blocks, b + 1));
        }
    };
    grow(0, 0);
    return out;
}

std::vector<Hypergraph> project_family(const Hypergraph& f, int k, std::size_t max_vertices)
{
    const int r = f.uniformity();
    if (k < 2 || k >= r)
        throw InputError("projection needs 2 <= k < r");
    const Hypergraph g = compact(f);
    const std::size_t n = g.vertex_count();
    const std::size_t m = g.edge_count();
    if (n > max_vertices)
        throw ResourceError("partition enumeration over " + std::to_string(n) + " vertices exceeds the budget");
    std::vector<std::vector<EdgeId>> completes(n);
    for (std::size_t id = 0; id < m; ++id)
        completes[g.edge(static_cast<EdgeId>(id)).back()].push_back(static_cast<EdgeId>(id));

    std::vector<int> part(n, 0);
    std::set<std::vector<Edge>> seen;
    std::vector<Hypergraph> out;

    auto finish = [&]() {
        std::vector<Edge> prefix;
        std::vector<Edge> suffix;
        for (std::size_t id = 0; id < m; ++id) {
            Edge pre;
            Edge suf;
            for (Vertex w : g.edge(static_cast<EdgeId>(id))) {
                if (part[w] < k)
                    pre.push_back(w);
                if (part[w] >= k - 1)
                    suf.push_back(w);
            }
            prefix.push_back(std::move(pre));
            suffix.push_back(std::move(suf));
        }
        std::sort(prefix.begin(), prefix.end());
        prefix.erase(std::unique(prefix.begin(), prefix.end()), prefix.end());
        for (std::size_t a = 0; a < prefix.size(); ++a) {
            for (std::size_t b = a + 1; b < prefix.size(); ++b) {
                if (meets(prefix[a], prefix[b]))
                    return;
            }
        }
        auto h = canonical_form(Hypergraph::from_edge_set(r - k + 1, n, std::move(suffix)));
        if (seen.insert(h.edge_list()).second)
            out.push_back(std::move(h));
    };

    std::function<void(std::size_t)> assign = [&](std::size_t v) {
        if (v == n) {
            finish();
            return;
        }
        for (int p = 0; p < r; ++p) {
            part[v] = p;
            bool ok = true;
            for (EdgeId id : completes[v]) {
                std::uint64_t mask = 0;
                for (Vertex w : g.edge(id)) {
                    const std::uint64_t bit = std::uint64_t{1} << part[w];
                    if (mask & bit) {
                        ok = false;
                        break;
                    }
                    mask |= bit;
                }
                if (!ok)
                    break;
            }
            if (ok)
                assign(v + 1);
        }
    };
    assign(0);
    return out;
}

} // namespace relturan
