#ifndef RELTURAN_HG_IO_HPP
#define RELTURAN_HG_IO_HPP

#include "relturan/hypergraph.hpp"

#include <iosfwd>
#include <string>

namespace relturan {

// ".hg" text format: a header line "r n m" followed by m lines, each holding r
// strictly increasing 0-based vertex ids separated by single spaces. LF line
// endings; duplicate edges are rejected.
Hypergraph read_hg(std::istream& in);
Hypergraph read_hg_file(const std::string& path);
Hypergraph parse_hg(const std::string& text);

void write_hg(std::ostream& out, const Hypergraph& h);
void write_hg_file(const std::string& path, const Hypergraph& h);
std::string format_hg(const Hypergraph& h);

} // namespace relturan

#endif
