#include "relturan/canonical.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace relturan {

namespace {

using Colouring = std::vector<std::uint32_t>;

// Replaces colours by the rank of their refined signature. The old colour
// leads the signature, so the new colouring is finer and cell order is kept.
bool refine_once(const Hypergraph& h, Colouring& colour)
{
    const std::size_t n = h.vertex_count();
    std::vector<std::pair<std::vector<std::uint32_t>, std::size_t>> signatures(n);
    std::vector<std::vector<std::uint32_t>> edge_sigs;
    for (std::size_t v = 0; v < n; ++v) {
        edge_sigs.clear();
        for (EdgeId id : h.incident(static_cast<Vertex>(v))) {
            std::vector<std::uint32_t> sig;
            for (Vertex u : h.edge(id)) {
                if (u != v)
                    sig.push_back(colour[u]);
            }
            std::sort(sig.begin(), sig.end());
            edge_sigs.push_back(std::move(sig));
        }
        std::sort(edge_sigs.begin(), edge_sigs.end());
        auto& s = signatures[v].first;
        s.push_back(colour[v]);
        s.push_back(static_cast<std::uint32_t>(edge_sigs.size()));
        for (const auto& es : edge_sigs) {
            s.insert(s.end(), es.begin(), es.end());
            s.push_back(~std::uint32_t{0});
        }
        signatures[v].second = v;
    }
    std::vector<std::size_t> order(n);
    for (std::size_t v = 0; v < n; ++v)
        order[v] = v;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return signatures[a].first < signatures[b].first;
    });
    Colouring next(n);
    std::uint32_t rank = 0;
    std::size_t old_cells = 0;
    {
        std::vector<std::uint32_t> seen(colour);
        std::sort(seen.begin(), seen.end());
        old_cells = static_cast<std::size_t>(std::unique(seen.begin(), seen.end()) - seen.begin());
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && signatures[order[i]].first != signatures[order[i - 1]].first)
            rank = static_cast<std::uint32_t>(i);
        next[order[i]] = rank;
    }
    std::size_t new_cells = 0;
    {
        std::vector<std::uint32_t> seen(next);
        std::sort(seen.begin(), seen.end());
        new_cells = static_cast<std::size_t>(std::unique(seen.begin(), seen.end()) - seen.begin());
    }
    colour = std::move(next);
    return new_cells != old_cells;
}

void refine(const Hypergraph& h, Colouring& colour)
{
    while (refine_once(h, colour)) {
    }
}

std::vector<Edge> certificate(const Hypergraph& h, const Colouring& colour)
{
    std::vector<Edge> edges;
    edges.reserve(h.edge_count());
    for (std::size_t id = 0; id < h.edge_count(); ++id) {
        Edge e;
        for (Vertex v : h.edge(static_cast<EdgeId>(id)))
            e.push_back(colour[v]);
        std::sort(e.begin(), e.end());
        edges.push_back(std::move(e));
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

void search(const Hypergraph& h, Colouring colour, std::optional<std::vector<Edge>>& best)
{
    refine(h, colour);
    const std::size_t n = h.vertex_count();
    // Colours are ranks, so a cell of size s occupies colours c..c+s-1 with
    // only c used; find the first colour shared by two vertices.
    std::vector<std::uint32_t> counts(n, 0);
    for (auto c : colour)
        ++counts[c];
    std::optional<std::uint32_t> target;
    for (std::uint32_t c = 0; c < n; ++c) {
        if (counts[c] > 1) {
            target = c;
            break;
        }
    }
    if (!target) {
        auto cert = certificate(h, colour);
        if (!best || cert < *best)
            best = std::move(cert);
        return;
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (colour[v] != *target)
            continue;
        Colouring next(colour);
        for (std::size_t u = 0; u < n; ++u) {
            if (next[u] == *target && u != v)
                next[u] = *target + 1;
        }
        search(h, std::move(next), best);
    }
}

} // namespace

Hypergraph compact(const Hypergraph& h)
{
    std::vector<Vertex> label(h.vertex_count(), 0);
    Vertex next = 0;
    for (std::size_t v = 0; v < h.vertex_count(); ++v) {
        if (h.degree(static_cast<Vertex>(v)) > 0)
            label[v] = next++;
    }
    std::vector<Edge> edges;
    for (std::size_t id = 0; id < h.edge_count(); ++id) {
        Edge e;
        for (Vertex v : h.edge(static_cast<EdgeId>(id)))
            e.push_back(label[v]);
        edges.push_back(std::move(e));
    }
    return Hypergraph(h.uniformity(), next, std::move(edges));
}

Hypergraph canonical_form(const Hypergraph& h)
{
    Hypergraph small = compact(h);
    if (small.vertex_count() == 0)
        return small;
    std::optional<std::vector<Edge>> best;
    search(small, Colouring(small.vertex_count(), 0), best);
    return Hypergraph(small.uniformity(), small.vertex_count(), std::move(*best));
}

bool isomorphic(const Hypergraph& a, const Hypergraph& b)
{
    if (a.uniformity() != b.uniformity() || a.edge_count() != b.edge_count())
        return false;
    return canonical_form(a) == canonical_form(b);
}

} // namespace relturan
