#ifndef RELTURAN_DETECTORS_HPP
#define RELTURAN_DETECTORS_HPP

#include "relturan/hypergraph.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace relturan {

/**
 * A Berge cycle certified by its core set: distinct vertices v_1..v_l and
 * distinct edges e_1..e_l with v_i, v_{i+1} in e_i and v_l, v_1 in e_l.
 */
struct BergeCycle {
    std::vector<Vertex> core;
    std::vector<EdgeId> edges;
};

struct BergeOptions {
    // Only report cycles whose edge set is not a sunflower.
    bool forbid_sunflower = false;
    // Only report cycles that use this edge.
    std::optional<EdgeId> through_edge;
};

// Visitor returns false to stop the enumeration.
using BergeVisitor = std::function<bool(const BergeCycle&)>;

/**
 * Backtracking over alternating vertex/edge sequences. Without a through
 * edge, v_1 is the smallest core vertex; candidates are pruned by their
 * distance back to the closing vertex in the 2-section. Each cycle may be
 * reported once per direction (and, with a through edge, per choice of the
 * two core vertices on it).
 */
void for_each_berge_cycle(const Hypergraph& h, int ell, const BergeOptions& options, const BergeVisitor& visit);
std::optional<BergeCycle> find_berge_cycle(const Hypergraph& h, int ell, const BergeOptions& options = {});

// Smallest l in [2, max_ell] with a Berge l-cycle; nullopt means girth > max_ell.
std::optional<int> girth(const Hypergraph& h, int max_ell);

struct SunflowerKernel {
    std::vector<Vertex> kernel;
    // A single edge is a sunflower whose kernel is not determined.
    bool unconstrained = false;
};

// Kernel if the edges of `f` pairwise intersect in one common set.
std::optional<SunflowerKernel> is_sunflower(const Hypergraph& f);
std::optional<SunflowerKernel> sunflower_kernel(const Hypergraph& h, std::span<const EdgeId> edges);

/**
 * A sunflower plus one extra edge: `petals` form a sunflower with kernel K,
 * `extra` meets K, and petals + extra is not a sunflower.
 */
struct SunflowerPlus {
    EdgeId extra = 0;
    std::vector<EdgeId> petals;
    std::vector<Vertex> kernel;
};

/**
 * Membership of `f` itself in the sunflower-plus family with at most `ell`
 * petals (and at least 2, unless allow_single_petal is set).
 */
std::optional<SunflowerPlus> is_sunflower_plus(const Hypergraph& f, int ell, bool allow_single_petal = false);

/**
 * Whether `h` contains a sunflower-plus member with at most ell petals, for
 * any ell >= 2. Any such member contains one with two petals, so the search
 * runs over edge triples (a, b, c): K = a∩b nonempty, c meets K, and the
 * triple is not a sunflower.
 */
void for_each_sunflower_plus(const Hypergraph& h, std::optional<EdgeId> through,
                             const std::function<bool(const SunflowerPlus&)>& visit);
std::optional<SunflowerPlus> find_sunflower_plus(const Hypergraph& h, std::optional<EdgeId> through = std::nullopt);

/// Injective edge-preserving map from a pattern into a host.
struct Embedding {
    std::vector<Vertex> vertex_map; // pattern vertex -> host vertex
    std::vector<EdgeId> edge_map;   // pattern edge -> host edge
};

/**
 * Enumerates injective embeddings of `pattern` (isolated pattern vertices are
 * not mapped and keep the value ~0). Pattern edges are matched one at a time
 * in an order where each edge meets an earlier one when possible.
 */
void for_each_embedding(const Hypergraph& pattern, const Hypergraph& host, std::optional<EdgeId> through,
                        const std::function<bool(const Embedding&)>& visit);
std::optional<Embedding> find_embedding(const Hypergraph& pattern, const Hypergraph& host,
                                        std::optional<EdgeId> through = std::nullopt);
// Number of distinct edge sets of `host` forming a copy of `pattern`.
std::size_t count_copies(const Hypergraph& pattern, const Hypergraph& host);

/// Loose cycle C_l^r: connectors 0..l-1, edge i holds connectors i and i+1 (mod l).
Hypergraph loose_cycle(int ell, int r);

/**
 * The 4-edge 3-graph F5 with u1..u3 = 0..2, v1..v3 = 3..5 and edges
 * {u1,u2,u3}, {u1,u2,v1}, {v1,v2,v3}, {u3,v2,v3}.
 */
Hypergraph f5();
// The variant {u1,u2,u3}, {u1,u2,v1}, {u1,v2,u3}, {v1,v2,v3}; not isomorphic to f5().
Hypergraph f5_variant();

// Visits loose l-cycles as cyclically ordered edge sequences, once per copy.
void for_each_loose_cycle(const Hypergraph& h, int ell, std::optional<EdgeId> through,
                          const std::function<bool(std::span<const EdgeId>)>& visit);
std::optional<Embedding> contains_loose_cycle(const Hypergraph& h, int ell, std::optional<EdgeId> through = std::nullopt);
std::size_t count_loose_cycles(const Hypergraph& h, int ell);
// Embedding of loose_cycle(l, r) matching a cyclic edge sequence.
Embedding loose_cycle_embedding(const Hypergraph& h, std::span<const EdgeId> cycle);

std::optional<Embedding> contains_f5(const Hypergraph& h, std::optional<EdgeId> through = std::nullopt);
std::size_t count_f5(const Hypergraph& h);

/**
 * A local isomorphism chi: V(f) -> V(target): a homomorphism with
 * chi(e) != chi(g) whenever e and g intersect. Isolated vertices of f map to 0.
 */
std::optional<std::vector<Vertex>> local_isomorphism(const Hypergraph& f, const Hypergraph& target);

// Default vertex budget for the exhaustive pattern enumerations below.
inline constexpr std::size_t kPatternVertexBudget = 12;

/**
 * All images of `f` under vertex quotients that are local isomorphisms onto
 * their image, in canonical form and deduplicated. Every member of H(f) contains
 * one of these. Throws ResourceError above the vertex budget.
 */
std::vector<Hypergraph> quotient_images(const Hypergraph& f, std::size_t max_vertices = kPatternVertexBudget);

/**
 * P_k(f): for every ordered r-partition of f whose first k parts induce a
 * matching, the (r-k+1)-graph induced by parts k..r. Canonical forms,
 * deduplicated. Throws ResourceError above the vertex budget.
 */
std::vector<Hypergraph> project_family(const Hypergraph& f, int k, std::size_t max_vertices = kPatternVertexBudget);

} // namespace relturan

#endif
