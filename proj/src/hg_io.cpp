#include "relturan/hg_io.hpp"

#include "relturan/error.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace relturan {

namespace {

// Splits on single spaces; rejects empty fields, tabs and trailing blanks.
std::vector<std::uint64_t> parse_fields(const std::string& line, std::size_t line_no)
{
    std::vector<std::uint64_t> out;
    const char* p = line.data();
    const char* end = p + line.size();
    if (p == end)
        throw InputError("line " + std::to_string(line_no) + ": empty line");
    while (true) {
        std::uint64_t value = 0;
        auto [next, ec] = std::from_chars(p, end, value);
        if (ec != std::errc() || next == p)
            throw InputError("line " + std::to_string(line_no) + ": expected a non-negative integer");
        out.push_back(value);
        p = next;
        if (p == end)
            break;
        if (*p != ' ' || p + 1 == end)
            throw InputError("line " + std::to_string(line_no) + ": fields must be separated by single spaces");
        ++p;
    }
    return out;
}

} // namespace

Hypergraph read_hg(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw InputError("empty .hg input");
    auto header = parse_fields(line, 1);
    if (header.size() != 3)
        throw InputError("line 1: header must be \"r n m\"");
    const auto r = header[0];
    const auto n = header[1];
    const auto m = header[2];
    if (r < 1 || r > 64)
        throw InputError("line 1: uniformity out of range");
    std::vector<Edge> edges;
    edges.reserve(m);
    for (std::uint64_t i = 0; i < m; ++i) {
        if (!std::getline(in, line))
            throw InputError("expected " + std::to_string(m) + " edges, found " + std::to_string(i));
        const std::size_t line_no = i + 2;
        auto fields = parse_fields(line, line_no);
        if (fields.size() != r)
            throw InputError("line " + std::to_string(line_no) + ": edge must have " + std::to_string(r) + " vertices");
        Edge e;
        for (std::size_t j = 0; j < fields.size(); ++j) {
            if (fields[j] >= n)
                throw InputError("line " + std::to_string(line_no) + ": vertex id out of range");
            if (j > 0 && fields[j] <= fields[j - 1])
                throw InputError("line " + std::to_string(line_no) + ": vertex ids must be strictly increasing");
            e.push_back(static_cast<Vertex>(fields[j]));
        }
        edges.push_back(std::move(e));
    }
    while (std::getline(in, line)) {
        if (!line.empty())
            throw InputError("trailing content after " + std::to_string(m) + " edges");
    }
    try {
        return Hypergraph(static_cast<int>(r), n, std::move(edges));
    } catch (const InputError& e) {
        throw InputError(std::string(".hg: ") + e.what());
    }
}

Hypergraph read_hg_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open " + path);
    return read_hg(in);
}

Hypergraph parse_hg(const std::string& text)
{
    std::istringstream in(text);
    return read_hg(in);
}

void write_hg(std::ostream& out, const Hypergraph& h)
{
    out << h.uniformity() << ' ' << h.vertex_count() << ' ' << h.edge_count() << '\n';
    for (std::size_t id = 0; id < h.edge_count(); ++id) {
        auto e = h.edge(static_cast<EdgeId>(id));
        for (std::size_t j = 0; j < e.size(); ++j) {
            if (j > 0)
                out << ' ';
            out << e[j];
        }
        out << '\n';
    }
}

void write_hg_file(const std::string& path, const Hypergraph& h)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw InputError("cannot write " + path);
    write_hg(out, h);
}

std::string format_hg(const Hypergraph& h)
{
    std::ostringstream out;
    write_hg(out, h);
    return out.str();
}

} // namespace relturan
