#ifndef RELTURAN_HYPERGRAPH_HPP
#define RELTURAN_HYPERGRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace relturan {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;
using Edge = std::vector<Vertex>;

/**
 * Immutable r-uniform hypergraph on the dense vertex range [0, n).
 *
 * Edges are stored sorted, in insertion order (the edge id is the position).
 * An incidence index (vertex -> incident edge ids, ascending) and a
 * lexicographic lookup index are built at construction.
 */
class Hypergraph {
public:
    Hypergraph() = default;
    Hypergraph(int r, std::size_t n);

    // Each edge is sorted on entry. Throws InputError on a bad vertex id,
    // wrong edge size, repeated vertex or duplicate edge.
    Hypergraph(int r, std::size_t n, std::vector<Edge> edges);

    // Same as the constructor, but duplicate edges are collapsed (first
    // occurrence wins) instead of rejected.
    static Hypergraph from_edge_set(int r, std::size_t n, std::vector<Edge> edges);

    int uniformity() const { return r_; }
    std::size_t vertex_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size() / static_cast<std::size_t>(r_ > 0 ? r_ : 1); }
    bool empty() const { return edges_.empty(); }

    std::span<const Vertex> edge(EdgeId id) const
    {
        return {edges_.data() + static_cast<std::size_t>(id) * r_, static_cast<std::size_t>(r_)};
    }
    std::span<const EdgeId> incident(Vertex v) const
    {
        return {incidence_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
    }
    std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

    // `vertices` must be sorted.
    std::optional<EdgeId> find_edge(std::span<const Vertex> vertices) const;
    bool has_edge(std::span<const Vertex> vertices) const { return find_edge(vertices).has_value(); }

    bool edge_contains(EdgeId id, Vertex v) const;

    std::vector<Edge> edge_list() const;

    // Subgraph with the given edges, in the given order, on the same vertex range.
    Hypergraph subgraph(std::span<const EdgeId> ids) const;

    // Same edge set, irrespective of edge order.
    bool same_edge_set(const Hypergraph& other) const;
    // Every edge of this hypergraph is an edge of `other`.
    bool is_subgraph_of(const Hypergraph& other) const;

    friend bool operator==(const Hypergraph& a, const Hypergraph& b)
    {
        return a.r_ == b.r_ && a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    void build_indices();

    int r_ = 0;
    std::size_t n_ = 0;
    std::vector<Vertex> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<EdgeId> incidence_;
    std::vector<EdgeId> lex_order_;
};

/// Maximum degree and maximum k-degree for 1 <= k < r.
struct DegreeProfile {
    std::size_t max_degree = 0;
    // max_k_degree[k] for 1 <= k < r; index 0 unused.
    std::vector<std::size_t> max_k_degree;

    std::size_t delta(int k) const
    {
        return k > 0 && static_cast<std::size_t>(k) < max_k_degree.size() ? max_k_degree[k] : 0;
    }
};

/**
 * Ordered partition of the vertex range into `part_count` parts (0-based).
 * Attached to an r-graph as an r-partition when every edge meets every part
 * exactly once.
 */
struct Partition {
    std::vector<int> part_of;
    int part_count = 0;

    std::vector<Vertex> members(int part) const;
    bool is_transversal(std::span<const Vertex> edge) const;
    // True when the partition covers the vertex range and every edge of `h`
    // is transversal with part_count == r.
    bool is_r_partition_of(const Hypergraph& h) const;
    // New partition whose part i is old part order[i].
    Partition reordered(std::span<const int> order) const;
};

struct Matching {
    std::vector<EdgeId> edges;
    std::size_t size() const { return edges.size(); }
};

struct PartiteReduction {
    Partition partition;
    Hypergraph subgraph;
    // Number of random partitions sampled and hill-climbing moves applied.
    int attempts = 0;
    int moves = 0;
};

/**
 * Degrees of every k-set contained in some edge. Keys are packed into 64 bits
 * when k * bits(n) <= 64, otherwise stored as vectors.
 */
class KSetDegrees {
public:
    KSetDegrees(const Hypergraph& h, int k);

    int k() const { return k_; }
    // `s` must be sorted with |s| == k.
    std::size_t degree(std::span<const Vertex> s) const;
    std::size_t max_degree() const { return max_; }

private:
    std::uint64_t pack(std::span<const Vertex> s) const;

    int k_ = 0;
    int bits_ = 0;
    bool packed_ = true;
    std::size_t max_ = 0;
    std::unordered_map<std::uint64_t, std::uint32_t> packed_counts_;
    std::map<std::vector<Vertex>, std::uint32_t> wide_counts_;
};

// Number of edges containing the vertex set S (1 <= |S| < r).
std::size_t k_degree(const Hypergraph& h, std::span<const Vertex> s);

DegreeProfile degree_profile(const Hypergraph& h);

// Maximum over all k-subsets S of edges of d(S), i.e. the maximum k-degree.
std::size_t max_k_degree(const Hypergraph& h, int k);

/**
 * Finds an r-partition whose transversal edges number at least r^{-r} e(H).
 * Tries the hint (if any) and up to 64 uniformly random partitions, keeps the
 * best, then hill-climbs on single-vertex moves to a local optimum.
 */
PartiteReduction partite_reduce(const Hypergraph& h, std::uint64_t seed,
                                const std::optional<Partition>& hint = std::nullopt);

// Number of edges of `h` transversal to `p`.
std::size_t transversal_count(const Hypergraph& h, const Partition& p);

/**
 * The |I|-graph with edges {e ∩ ∪_{i∈I} V_i}, duplicates collapsed. The
 * vertex range is kept, so vertices outside the selected parts are isolated.
 */
Hypergraph induced_k_graph(const Hypergraph& h, const Partition& p, std::span<const int> parts);

// Greedy maximal matching, scanning edges by ascending id.
Matching greedy_matching(const Hypergraph& h);

// Greedy linear subgraph: an edge is kept unless it shares a pair with a kept edge.
Hypergraph linear_subgraph(const Hypergraph& h);

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// Calls fn(subset) for each k-subset of `items` in lexicographic position order.
template <typename T, typename Fn>
void for_each_subset(std::span<const T> items, std::size_t k, Fn&& fn)
{
    if (k > items.size())
        return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i)
        idx[i] = i;
    std::vector<T> subset(k);
    while (true) {
        for (std::size_t i = 0; i < k; ++i)
            subset[i] = items[idx[i]];
        fn(std::span<const T>(subset));
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == items.size() - k + (i - 1))
            --i;
        if (i == 0)
            return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

// Sorted intersection of two sorted vertex lists.
std::vector<Vertex> intersect(std::span<const Vertex> a, std::span<const Vertex> b);
std::size_t intersection_size(std::span<const Vertex> a, std::span<const Vertex> b);

} // namespace relturan

#endif
