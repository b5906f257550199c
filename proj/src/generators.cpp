#include "relturan/generators.hpp"

#include "relturan/error.hpp"
#include "relturan/rng.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace relturan {

namespace {

std::vector<std::string> split_args(const std::string& text)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, ','))
        out.push_back(cur);
    return out;
}

std::uint64_t to_u64(const std::string& s, const std::string& what)
{
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        if (!s.empty() && s[0] == '-')
            throw std::invalid_argument("negative");
        v = std::stoull(s, &used);
    } catch (const std::exception&) {
        throw InputError("bad " + what + " '" + s + "'");
    }
    if (used != s.size())
        throw InputError("bad " + what + " '" + s + "'");
    return v;
}

double to_prob(const std::string& s)
{
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw InputError("bad probability '" + s + "'");
    }
    if (used != s.size() || !(v >= 0.0 && v <= 1.0))
        throw InputError("probability must lie in [0, 1]: '" + s + "'");
    return v;
}

std::uint64_t seed_arg(const std::string& s)
{
    if (s.rfind("seed=", 0) != 0)
        throw InputError("expected seed=S, got '" + s + "'");
    return to_u64(s.substr(5), "seed");
}

void check_budget(std::size_t n, int r)
{
    if (n > kVertexBudget)
        throw ResourceError("host has more than " + std::to_string(kVertexBudget) + " vertices");
    if (binomial(n, static_cast<std::uint64_t>(r)) > kSubsetBudget)
        throw ResourceError("host would enumerate more than " + std::to_string(kSubsetBudget) + " subsets");
}

// shortest text that parses back to the same double
std::string format_double(double p)
{
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, p);
    return std::string(buf, res.ptr);
}

// Calls fn on every r-subset of [0, n) in colex order.
template <typename Fn>
void for_each_colex(std::size_t n, int r, Fn&& fn)
{
    const auto k = static_cast<std::size_t>(r);
    if (k > n || k == 0)
        return;
    std::vector<Vertex> c(k);
    for (std::size_t i = 0; i < k; ++i)
        c[i] = static_cast<Vertex>(i);
    while (true) {
        fn(c);
        std::size_t i = 0;
        while (i < k) {
            const std::size_t limit = i + 1 < k ? c[i + 1] : n;
            if (c[i] + 1 < limit)
                break;
            ++i;
        }
        if (i == k)
            return;
        ++c[i];
        for (std::size_t j = 0; j < i; ++j)
            c[j] = static_cast<Vertex>(j);
    }
}

} // namespace

HostSpec HostSpec::complete(std::size_t n, int r)
{
    HostSpec s;
    s.kind = HostKind::Complete;
    s.n = n;
    s.r = r;
    return s;
}

HostSpec HostSpec::random(std::size_t n, int r, double p, std::uint64_t seed)
{
    HostSpec s = complete(n, r);
    s.kind = HostKind::Random;
    s.p = p;
    s.seed = seed;
    return s;
}

HostSpec HostSpec::linear_random(std::size_t n, int r, double p, std::uint64_t seed)
{
    HostSpec s = random(n, r, p, seed);
    s.kind = HostKind::LinearRandom;
    return s;
}

HostSpec HostSpec::sunflower(std::size_t delta, int kernel, int r)
{
    HostSpec s;
    s.kind = HostKind::Sunflower;
    s.delta = delta;
    s.kernel = kernel;
    s.r = r;
    s.n = static_cast<std::size_t>(kernel) + delta * static_cast<std::size_t>(r - kernel);
    return s;
}

HostSpec HostSpec::partite(std::vector<std::size_t> sizes)
{
    HostSpec s;
    s.kind = HostKind::PartiteComplete;
    s.r = static_cast<int>(sizes.size());
    s.n = 0;
    for (auto z : sizes)
        s.n += z;
    s.sizes = std::move(sizes);
    return s;
}

HostSpec HostSpec::fano()
{
    HostSpec s;
    s.kind = HostKind::Fano;
    s.n = 7;
    s.r = 3;
    return s;
}

HostSpec HostSpec::parse(const std::string& text)
{
    auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    if (head == "fano" && colon == std::string::npos)
        return fano();
    if (colon == std::string::npos)
        throw InputError("unknown host spec '" + text + "'");
    auto args = split_args(text.substr(colon + 1));
    auto need = [&](std::size_t count) {
        if (args.size() != count)
            throw InputError("host spec '" + text + "' needs " + std::to_string(count) + " arguments");
    };
    HostSpec s;
    if (head == "complete") {
        need(2);
        s = complete(to_u64(args[0], "n"), static_cast<int>(to_u64(args[1], "r")));
    } else if (head == "random" || head == "linear") {
        need(4);
        const auto n = to_u64(args[0], "n");
        const auto r = static_cast<int>(to_u64(args[1], "r"));
        s = head == "random" ? random(n, r, to_prob(args[2]), seed_arg(args[3]))
                             : linear_random(n, r, to_prob(args[2]), seed_arg(args[3]));
    } else if (head == "sunflower") {
        need(3);
        const auto r = static_cast<int>(to_u64(args[2], "r"));
        const auto k = static_cast<int>(to_u64(args[1], "kernel size"));
        if (k >= r)
            throw InputError("sunflower kernel must be smaller than r");
        s = sunflower(to_u64(args[0], "edge count"), k, r);
    } else if (head == "partite") {
        std::vector<std::size_t> sizes;
        for (const auto& a : args)
            sizes.push_back(to_u64(a, "part size"));
        s = partite(std::move(sizes));
    } else {
        throw InputError("unknown host spec '" + text + "'");
    }
    if (s.r < 2)
        throw InputError("uniformity must be at least 2");
    return s;
}

std::string HostSpec::to_string() const
{
    const std::string nr = std::to_string(n) + "," + std::to_string(r);
    switch (kind) {
    case HostKind::Complete:
        return "complete:" + nr;
    case HostKind::Random:
        return "random:" + nr + "," + format_double(p) + ",seed=" + std::to_string(seed);
    case HostKind::LinearRandom:
        return "linear:" + nr + "," + format_double(p) + ",seed=" + std::to_string(seed);
    case HostKind::Sunflower:
        return "sunflower:" + std::to_string(delta) + "," + std::to_string(kernel) + "," + std::to_string(r);
    case HostKind::PartiteComplete: {
        std::string out = "partite:";
        for (std::size_t i = 0; i < sizes.size(); ++i)
            out += (i ? "," : "") + std::to_string(sizes[i]);
        return out;
    }
    case HostKind::Fano:
        return "fano";
    }
    return {};
}

Hypergraph generate(const HostSpec& spec)
{
    if (spec.r < 2)
        throw InputError("uniformity must be at least 2");
    switch (spec.kind) {
    case HostKind::Complete: {
        check_budget(spec.n, spec.r);
        std::vector<Edge> edges;
        for_each_colex(spec.n, spec.r, [&](const std::vector<Vertex>& c) { edges.push_back(c); });
        return Hypergraph(spec.r, spec.n, std::move(edges));
    }
    case HostKind::Random:
    case HostKind::LinearRandom: {
        if (!(spec.p >= 0.0 && spec.p <= 1.0))
            throw InputError("probability must lie in [0, 1]");
        check_budget(spec.n, spec.r);
        Rng rng(spec.seed);
        std::vector<Edge> edges;
        for_each_colex(spec.n, spec.r, [&](const std::vector<Vertex>& c) {
            if (rng.uniform() < spec.p)
                edges.push_back(c);
        });
        Hypergraph h(spec.r, spec.n, std::move(edges));
        return spec.kind == HostKind::Random ? h : linear_subgraph(h);
    }
    case HostKind::Sunflower: {
        if (spec.kernel < 0 || spec.kernel >= spec.r)
            throw InputError("sunflower kernel must be smaller than r");
        const std::size_t k = static_cast<std::size_t>(spec.kernel);
        const std::size_t petal = static_cast<std::size_t>(spec.r) - k;
        const std::size_t n = k + spec.delta * petal;
        if (n > kVertexBudget)
            throw ResourceError("sunflower host too large");
        std::vector<Edge> edges;
        for (std::size_t i = 0; i < spec.delta; ++i) {
            Edge e;
            for (std::size_t j = 0; j < k; ++j)
                e.push_back(static_cast<Vertex>(j));
            for (std::size_t j = 0; j < petal; ++j)
                e.push_back(static_cast<Vertex>(k + i * petal + j));
            edges.push_back(std::move(e));
        }
        return Hypergraph(spec.r, n, std::move(edges));
    }
    case HostKind::PartiteComplete: {
        if (spec.sizes.size() < 2)
            throw InputError("partite hosts need at least two parts");
        std::uint64_t count = 1;
        std::size_t n = 0;
        std::vector<std::size_t> offset;
        for (auto z : spec.sizes) {
            if (z == 0)
                throw InputError("part sizes must be positive");
            offset.push_back(n);
            n += z;
            count *= z;
            if (count > kSubsetBudget)
                throw ResourceError("partite host too large");
        }
        if (n > kVertexBudget)
            throw ResourceError("partite host too large");
        std::vector<Edge> edges;
        std::vector<std::size_t> pick(spec.sizes.size(), 0);
        while (true) {
            Edge e;
            for (std::size_t i = 0; i < pick.size(); ++i)
                e.push_back(static_cast<Vertex>(offset[i] + pick[i]));
            edges.push_back(std::move(e));
            std::size_t i = pick.size();
            while (i > 0 && ++pick[i - 1] == spec.sizes[i - 1]) {
                pick[i - 1] = 0;
                --i;
            }
            if (i == 0)
                break;
        }
        return Hypergraph(static_cast<int>(spec.sizes.size()), n, std::move(edges));
    }
    case HostKind::Fano:
        return Hypergraph(3, 7, {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5}});
    }
    throw InputError("unknown host kind");
}

HostSpec tightness_host(TightnessTheorem theorem, std::size_t delta, int r, std::uint64_t seed)
{
    if (r < 2)
        throw InputError("uniformity must be at least 2");
    switch (theorem) {
    case TightnessTheorem::BergeClique: {
        // ceil of the (r-1)-th root, corrected for floating error
        auto n = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(delta), 1.0 / (r - 1)) - 1e-9));
        while (n > 0 && std::pow(static_cast<double>(n - 1), r - 1) >= static_cast<double>(delta))
            --n;
        if (n < static_cast<std::size_t>(r))
            throw InputError("maximum degree too small for a clique host");
        return HostSpec::complete(n, r);
    }
    case TightnessTheorem::LooseRandom:
    case TightnessTheorem::LooseLinear: {
        const std::size_t n = delta;
        if (n < static_cast<std::size_t>(r))
            throw InputError("maximum degree too small for a random host");
        const double p = std::pow(static_cast<double>(n), 2.0 - r);
        return theorem == TightnessTheorem::LooseRandom ? HostSpec::random(n, r, p, seed)
                                                        : HostSpec::linear_random(n, r, p, seed);
    }
    }
    throw InputError("unknown theorem");
}

} // namespace relturan
