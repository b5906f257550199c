#include "relturan/family.hpp"

#include "relturan/canonical.hpp"
#include "relturan/error.hpp"
#include "relturan/hg_io.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

namespace relturan {

namespace {

ForbiddenFamily leaf(FamilyKind kind, int ell)
{
    ForbiddenFamily f;
    f.kind = kind;
    f.ell = ell;
    return f;
}

int parse_int(const std::string& text, const std::string& context)
{
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw InputError("bad integer '" + text + "' in " + context);
    return value;
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep))
        out.push_back(cur);
    if (!text.empty() && text.back() == sep)
        out.emplace_back();
    return out;
}

Hypergraph parse_pattern(const std::string& body)
{
    auto bar = body.find('|');
    if (bar == std::string::npos)
        throw InputError("pattern needs the form R|a-b-c,...");
    const int r = parse_int(body.substr(0, bar), "pattern uniformity");
    std::vector<Edge> edges;
    Vertex top = 0;
    for (const auto& e : split(body.substr(bar + 1), ',')) {
        Edge edge;
        for (const auto& v : split(e, '-')) {
            const int id = parse_int(v, "pattern edge");
            if (id < 0)
                throw InputError("negative vertex in pattern");
            edge.push_back(static_cast<Vertex>(id));
            top = std::max(top, static_cast<Vertex>(id));
        }
        edges.push_back(std::move(edge));
    }
    return Hypergraph(r, top + 1, std::move(edges));
}

std::string format_pattern(const Hypergraph& p)
{
    std::string out = "pattern:" + std::to_string(p.uniformity()) + "|";
    for (std::size_t id = 0; id < p.edge_count(); ++id) {
        if (id > 0)
            out += ',';
        auto e = p.edge(static_cast<EdgeId>(id));
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (i > 0)
                out += '-';
            out += std::to_string(e[i]);
        }
    }
    return out;
}

void check_ell(FamilyKind kind, int ell)
{
    const int low = kind == FamilyKind::LooseCycle ? 3 : 2;
    if (ell < low)
        throw InputError("cycle length " + std::to_string(ell) + " too small for this family");
}

bool berge_kind(FamilyKind k)
{
    return k == FamilyKind::BergeCycle || k == FamilyKind::BergeUpTo || k == FamilyKind::BergeNoSunflower ||
           k == FamilyKind::BergeUpToNoSunflower;
}

bool no_sunflower(FamilyKind k) { return k == FamilyKind::BergeNoSunflower || k == FamilyKind::BergeUpToNoSunflower; }

bool upto(FamilyKind k) { return k == FamilyKind::BergeUpTo || k == FamilyKind::BergeUpToNoSunflower; }

// Visits leaves of a family in order; stops when fn returns true.
template <typename Fn>
bool any_leaf(const ForbiddenFamily& f, Fn&& fn)
{
    if (f.kind == FamilyKind::Union) {
        for (const auto& m : f.members) {
            if (any_leaf(m, fn))
                return true;
        }
        return false;
    }
    return fn(f);
}

std::optional<Witness> find_leaf(const Hypergraph& h, const ForbiddenFamily& f, std::optional<EdgeId> through)
{
    const std::string name = f.to_string();
    switch (f.kind) {
    case FamilyKind::BergeCycle:
    case FamilyKind::BergeUpTo:
    case FamilyKind::BergeNoSunflower:
    case FamilyKind::BergeUpToNoSunflower: {
        const int low = upto(f.kind) ? 2 : f.ell;
        for (int ell = low; ell <= f.ell; ++ell) {
            if (no_sunflower(f.kind) && ell == 2)
                continue; // two edges always form a sunflower
            BergeOptions opt;
            opt.forbid_sunflower = no_sunflower(f.kind);
            opt.through_edge = through;
            if (auto c = find_berge_cycle(h, ell, opt))
                return Witness{name, std::move(*c)};
        }
        return std::nullopt;
    }
    case FamilyKind::LooseCycle:
        if (auto e = contains_loose_cycle(h, f.ell, through))
            return Witness{name, PatternWitness{loose_cycle(f.ell, h.uniformity()), std::move(*e)}};
        return std::nullopt;
    case FamilyKind::SunflowerPlus:
        if (auto s = find_sunflower_plus(h, through))
            return Witness{name, std::move(*s)};
        return std::nullopt;
    case FamilyKind::F5:
        if (h.uniformity() != 3)
            return std::nullopt;
        if (auto e = contains_f5(h, through))
            return Witness{name, PatternWitness{f5(), std::move(*e)}};
        return std::nullopt;
    case FamilyKind::ExplicitPatterns:
        for (const auto& p : f.patterns) {
            if (p.uniformity() != h.uniformity())
                continue;
            if (auto e = find_embedding(p, h, through))
                return Witness{format_pattern(p), PatternWitness{p, std::move(*e)}};
        }
        return std::nullopt;
    case FamilyKind::Union:
        break;
    }
    return std::nullopt;
}

std::optional<std::vector<Vertex>> kernel_if_sunflower(const Hypergraph& h, std::span<const EdgeId> ids)
{
    if (ids.size() < 2)
        return std::nullopt;
    auto k = intersect(h.edge(ids[0]), h.edge(ids[1]));
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            if (intersect(h.edge(ids[i]), h.edge(ids[j])) != k)
                return std::nullopt;
        }
    }
    return k;
}

bool valid_ids(const Hypergraph& h, std::span<const EdgeId> ids)
{
    std::set<EdgeId> seen;
    for (EdgeId id : ids) {
        if (id >= h.edge_count() || !seen.insert(id).second)
            return false;
    }
    return true;
}

bool validate_berge(const Hypergraph& h, const ForbiddenFamily& f, const BergeCycle& c)
{
    const std::size_t l = c.core.size();
    if (!berge_kind(f.kind) || l < 2 || c.edges.size() != l)
        return false;
    if (upto(f.kind) ? (l > static_cast<std::size_t>(f.ell)) : (l != static_cast<std::size_t>(f.ell)))
        return false;
    if (!valid_ids(h, c.edges))
        return false;
    std::set<Vertex> core(c.core.begin(), c.core.end());
    if (core.size() != l || *core.rbegin() >= h.vertex_count())
        return false;
    for (std::size_t i = 0; i < l; ++i) {
        auto e = h.edge(c.edges[i]);
        if (!std::binary_search(e.begin(), e.end(), c.core[i]) ||
            !std::binary_search(e.begin(), e.end(), c.core[(i + 1) % l]))
            return false;
    }
    if (no_sunflower(f.kind) && kernel_if_sunflower(h, c.edges))
        return false;
    return true;
}

bool validate_embedding(const Hypergraph& h, const ForbiddenFamily& f, const PatternWitness& w)
{
    const Hypergraph& p = w.pattern;
    if (p.uniformity() != h.uniformity())
        return false;
    bool member = false;
    switch (f.kind) {
    case FamilyKind::LooseCycle:
        member = isomorphic(p, loose_cycle(f.ell, h.uniformity()));
        break;
    case FamilyKind::F5:
        member = isomorphic(p, relturan::f5());
        break;
    case FamilyKind::ExplicitPatterns:
        member = std::any_of(f.patterns.begin(), f.patterns.end(), [&](const Hypergraph& q) { return isomorphic(p, q); });
        break;
    default:
        break;
    }
    if (!member)
        return false;
    const auto& vm = w.embedding.vertex_map;
    const auto& em = w.embedding.edge_map;
    if (vm.size() != p.vertex_count() || em.size() != p.edge_count() || !valid_ids(h, em))
        return false;
    std::set<Vertex> images;
    for (std::size_t v = 0; v < p.vertex_count(); ++v) {
        if (p.degree(static_cast<Vertex>(v)) == 0)
            continue;
        if (vm[v] >= h.vertex_count() || !images.insert(vm[v]).second)
            return false;
    }
    for (std::size_t id = 0; id < p.edge_count(); ++id) {
        Edge img;
        for (Vertex v : p.edge(static_cast<EdgeId>(id)))
            img.push_back(vm[v]);
        std::sort(img.begin(), img.end());
        auto e = h.edge(em[id]);
        if (!std::equal(img.begin(), img.end(), e.begin(), e.end()))
            return false;
    }
    return true;
}

bool validate_sunflower_plus(const Hypergraph& h, const ForbiddenFamily& f, const SunflowerPlus& s)
{
    if (f.kind != FamilyKind::SunflowerPlus || s.petals.size() < 2 || s.petals.size() > static_cast<std::size_t>(f.ell))
        return false;
    std::vector<EdgeId> all(s.petals);
    all.push_back(s.extra);
    if (!valid_ids(h, all))
        return false;
    auto kernel = kernel_if_sunflower(h, s.petals);
    if (!kernel || *kernel != s.kernel || kernel->empty())
        return false;
    if (intersection_size(h.edge(s.extra), *kernel) == 0)
        return false;
    for (EdgeId p : s.petals) {
        if (intersect(h.edge(p), h.edge(s.extra)) != *kernel)
            return true;
    }
    return false;
}

} // namespace

ForbiddenFamily ForbiddenFamily::berge(int ell)
{
    check_ell(FamilyKind::BergeCycle, ell);
    return leaf(FamilyKind::BergeCycle, ell);
}

ForbiddenFamily ForbiddenFamily::berge_upto(int ell)
{
    check_ell(FamilyKind::BergeUpTo, ell);
    return leaf(FamilyKind::BergeUpTo, ell);
}

ForbiddenFamily ForbiddenFamily::berge_nosun(int ell)
{
    check_ell(FamilyKind::BergeNoSunflower, ell);
    return leaf(FamilyKind::BergeNoSunflower, ell);
}

ForbiddenFamily ForbiddenFamily::berge_upto_nosun(int ell)
{
    check_ell(FamilyKind::BergeUpToNoSunflower, ell);
    return leaf(FamilyKind::BergeUpToNoSunflower, ell);
}

ForbiddenFamily ForbiddenFamily::loose(int ell)
{
    check_ell(FamilyKind::LooseCycle, ell);
    return leaf(FamilyKind::LooseCycle, ell);
}

ForbiddenFamily ForbiddenFamily::sunflower_plus(int ell)
{
    check_ell(FamilyKind::SunflowerPlus, ell);
    return leaf(FamilyKind::SunflowerPlus, ell);
}

ForbiddenFamily ForbiddenFamily::f5() { return leaf(FamilyKind::F5, 0); }

ForbiddenFamily ForbiddenFamily::explicit_patterns(std::vector<Hypergraph> patterns)
{
    for (const auto& p : patterns) {
        if (p.edge_count() == 0)
            throw InputError("explicit patterns need at least one edge");
    }
    ForbiddenFamily f = leaf(FamilyKind::ExplicitPatterns, 0);
    for (auto& p : patterns)
        f.patterns.push_back(compact(p));
    return f;
}

ForbiddenFamily ForbiddenFamily::union_of(std::vector<ForbiddenFamily> members)
{
    ForbiddenFamily f = leaf(FamilyKind::Union, 0);
    for (auto& m : members) {
        if (m.kind == FamilyKind::Union)
            f.members.insert(f.members.end(), m.members.begin(), m.members.end());
        else
            f.members.push_back(std::move(m));
    }
    if (f.members.size() == 1)
        return f.members.front();
    return f;
}

ForbiddenFamily ForbiddenFamily::parse(const std::string& text)
{
    std::vector<ForbiddenFamily> parts;
    for (const auto& token : split(text, '+')) {
        auto colon = token.find(':');
        const std::string head = token.substr(0, colon);
        const std::string arg = colon == std::string::npos ? "" : token.substr(colon + 1);
        if (head == "f5" && colon == std::string::npos) {
            parts.push_back(ForbiddenFamily::f5());
        } else if (colon == std::string::npos) {
            throw InputError("unknown family '" + token + "'");
        } else if (head == "berge") {
            parts.push_back(berge(parse_int(arg, token)));
        } else if (head == "berge-upto") {
            parts.push_back(berge_upto(parse_int(arg, token)));
        } else if (head == "berge-nosun") {
            parts.push_back(berge_nosun(parse_int(arg, token)));
        } else if (head == "berge-upto-nosun") {
            parts.push_back(berge_upto_nosun(parse_int(arg, token)));
        } else if (head == "loose") {
            parts.push_back(loose(parse_int(arg, token)));
        } else if (head == "sunplus") {
            parts.push_back(sunflower_plus(parse_int(arg, token)));
        } else if (head == "pattern") {
            parts.push_back(explicit_patterns({parse_pattern(arg)}));
        } else if (head == "file") {
            parts.push_back(explicit_patterns({read_hg_file(arg)}));
        } else {
            throw InputError("unknown family '" + token + "'");
        }
    }
    if (parts.empty())
        throw InputError("empty family string");
    return union_of(std::move(parts));
}

std::string ForbiddenFamily::to_string() const
{
    const std::string l = std::to_string(ell);
    switch (kind) {
    case FamilyKind::BergeCycle:
        return "berge:" + l;
    case FamilyKind::BergeUpTo:
        return "berge-upto:" + l;
    case FamilyKind::BergeNoSunflower:
        return "berge-nosun:" + l;
    case FamilyKind::BergeUpToNoSunflower:
        return "berge-upto-nosun:" + l;
    case FamilyKind::LooseCycle:
        return "loose:" + l;
    case FamilyKind::SunflowerPlus:
        return "sunplus:" + l;
    case FamilyKind::F5:
        return "f5";
    case FamilyKind::ExplicitPatterns: {
        std::string out;
        for (const auto& p : patterns) {
            if (!out.empty())
                out += '+';
            out += format_pattern(p);
        }
        return out;
    }
    case FamilyKind::Union: {
        std::string out;
        for (const auto& m : members) {
            if (!out.empty())
                out += '+';
            out += m.to_string();
        }
        return out.empty() ? "none" : out;
    }
    }
    return {};
}

std::vector<EdgeId> Witness::edges() const
{
    std::vector<EdgeId> out;
    if (auto* b = std::get_if<BergeCycle>(&certificate)) {
        out = b->edges;
    } else if (auto* p = std::get_if<PatternWitness>(&certificate)) {
        out = p->embedding.edge_map;
    } else {
        const auto& s = std::get<SunflowerPlus>(certificate);
        out = s.petals;
        out.push_back(s.extra);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<Witness> find_member(const Hypergraph& h, const ForbiddenFamily& family, std::optional<EdgeId> through)
{
    if (through && *through >= h.edge_count())
        throw InputError("through edge id out of range");
    std::optional<Witness> found;
    any_leaf(family, [&](const ForbiddenFamily& f) {
        found = find_leaf(h, f, through);
        return found.has_value();
    });
    return found;
}

void for_each_copy(const Hypergraph& h, const ForbiddenFamily& family,
                   const std::function<void(std::span<const EdgeId>)>& visit, std::size_t budget)
{
    std::set<std::vector<EdgeId>> seen;
    auto offer = [&](std::vector<EdgeId> ids) {
        std::sort(ids.begin(), ids.end());
        if (!seen.insert(ids).second)
            return;
        if (seen.size() > budget)
            throw ResourceError("copy enumeration exceeded " + std::to_string(budget) + " copies");
        visit(ids);
    };
    any_leaf(family, [&](const ForbiddenFamily& f) {
        switch (f.kind) {
        case FamilyKind::BergeCycle:
        case FamilyKind::BergeUpTo:
        case FamilyKind::BergeNoSunflower:
        case FamilyKind::BergeUpToNoSunflower: {
            const int low = upto(f.kind) ? 2 : f.ell;
            for (int ell = std::max(low, no_sunflower(f.kind) ? 3 : 2); ell <= f.ell; ++ell) {
                BergeOptions opt;
                opt.forbid_sunflower = no_sunflower(f.kind);
                for_each_berge_cycle(h, ell, opt, [&](const BergeCycle& c) {
                    offer(c.edges);
                    return true;
                });
            }
            break;
        }
        case FamilyKind::LooseCycle:
            for_each_loose_cycle(h, f.ell, std::nullopt, [&](std::span<const EdgeId> c) {
                offer({c.begin(), c.end()});
                return true;
            });
            break;
        case FamilyKind::SunflowerPlus:
            for_each_sunflower_plus(h, std::nullopt, [&](const SunflowerPlus& s) {
                offer({s.petals[0], s.petals[1], s.extra});
                return true;
            });
            break;
        case FamilyKind::F5:
            if (h.uniformity() == 3) {
                for_each_embedding(relturan::f5(), h, std::nullopt, [&](const Embedding& e) {
                    offer(e.edge_map);
                    return true;
                });
            }
            break;
        case FamilyKind::ExplicitPatterns:
            for (const auto& p : f.patterns) {
                if (p.uniformity() != h.uniformity())
                    continue;
                for_each_embedding(p, h, std::nullopt, [&](const Embedding& e) {
                    offer(e.edge_map);
                    return true;
                });
            }
            break;
        case FamilyKind::Union:
            break;
        }
        return false;
    });
}

bool validate_witness(const Hypergraph& h, const ForbiddenFamily& family, const Witness& w)
{
    return any_leaf(family, [&](const ForbiddenFamily& f) {
        if (f.kind == FamilyKind::ExplicitPatterns) {
            // Each pattern is its own member name.
            bool named = false;
            for (const auto& p : f.patterns)
                named = named || format_pattern(p) == w.member;
            if (!named)
                return false;
        } else if (f.to_string() != w.member) {
            return false;
        }
        if (auto* b = std::get_if<BergeCycle>(&w.certificate))
            return validate_berge(h, f, *b);
        if (auto* p = std::get_if<PatternWitness>(&w.certificate))
            return validate_embedding(h, f, *p);
        return validate_sunflower_plus(h, f, std::get<SunflowerPlus>(w.certificate));
    });
}

} // namespace relturan
