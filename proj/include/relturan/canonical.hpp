#ifndef RELTURAN_CANONICAL_HPP
#define RELTURAN_CANONICAL_HPP

#include "relturan/hypergraph.hpp"

namespace relturan {

/**
 * Canonical relabelling of the non-isolated part of `h`.
 *
 * Isolated vertices are dropped and the rest are renumbered 0..n'-1 so that
 * two hypergraphs get identical results iff they are isomorphic (ignoring
 * isolated vertices). Colour refinement plus individualisation with
 * backtracking; the certificate is the sorted edge list, minimised over the
 * leaves of the search tree. Intended for small patterns (tens of vertices).
 */
Hypergraph canonical_form(const Hypergraph& h);

bool isomorphic(const Hypergraph& a, const Hypergraph& b);

// Drops isolated vertices, renumbering the rest in increasing order.
Hypergraph compact(const Hypergraph& h);

} // namespace relturan

#endif
