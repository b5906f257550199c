#ifndef RELTURAN_GENERATORS_HPP
#define RELTURAN_GENERATORS_HPP

#include "relturan/hypergraph.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace relturan {

enum class HostKind { Complete, Random, Sunflower, PartiteComplete, LinearRandom, Fano };

/**
 * Host description. String grammar:
 *   complete:n,r          all r-subsets of n vertices
 *   random:n,r,p,seed=S   each r-subset independently with probability p
 *   linear:n,r,p,seed=S   random, then greedy linear subgraph
 *   sunflower:D,k,r       D edges sharing the kernel {0..k-1}
 *   partite:a,b,...       complete r-partite r-graph with the given part sizes
 *   fano                  the Fano plane
 */
struct HostSpec {
    HostKind kind = HostKind::Complete;
    std::size_t n = 0;
    int r = 3;
    double p = 0.0;
    std::uint64_t seed = 0;
    std::size_t delta = 0;      // sunflower edge count
    int kernel = 0;             // sunflower kernel size
    std::vector<std::size_t> sizes;

    static HostSpec complete(std::size_t n, int r);
    static HostSpec random(std::size_t n, int r, double p, std::uint64_t seed);
    static HostSpec linear_random(std::size_t n, int r, double p, std::uint64_t seed);
    static HostSpec sunflower(std::size_t delta, int kernel, int r);
    static HostSpec partite(std::vector<std::size_t> sizes);
    static HostSpec fano();

    static HostSpec parse(const std::string& text);
    std::string to_string() const;
};

// Generation refuses specs that would enumerate more than this many r-subsets.
inline constexpr std::uint64_t kSubsetBudget = 50'000'000;
inline constexpr std::size_t kVertexBudget = 100'000;

/**
 * Deterministic in the spec. Random hosts walk the r-subsets in colex order
 * (c_0 < ... < c_{r-1}, ordered by c_{r-1}, then c_{r-2}, ...) and keep each
 * one when Rng(seed).uniform() < p, one draw per subset.
 */
Hypergraph generate(const HostSpec& spec);

enum class TightnessTheorem {
    BergeClique,    // clique of order ceil(D^{1/(r-1)})
    LooseRandom,    // random 3-graph with n = D and p = n^{2-r}
    LooseLinear,    // its linear subgraph
};

HostSpec tightness_host(TightnessTheorem theorem, std::size_t delta, int r = 3, std::uint64_t seed = 1);

} // namespace relturan

#endif
