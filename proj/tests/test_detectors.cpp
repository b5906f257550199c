#include "oracles.hpp"

#include "relturan/canonical.hpp"
#include "relturan/detectors.hpp"
#include "relturan/error.hpp"
#include "relturan/family.hpp"
#include "relturan/rng.hpp"

#include <doctest.h>

using namespace relturan;

namespace {

const Hypergraph kFano(3, 7, {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5}});

Hypergraph random_small(Rng& rng, int r, std::size_t n, std::size_t max_edges)
{
    auto all = oracle::complete(n, r).edge_list();
    rng.shuffle(std::span<Edge>(all));
    all.resize(1 + rng.below(std::min(max_edges, all.size())));
    return Hypergraph(r, n, all);
}

bool check_berge(const Hypergraph& h, const BergeCycle& c, int ell)
{
    std::vector<Edge> es;
    for (EdgeId id : c.edges)
        es.push_back(Edge(h.edge(id).begin(), h.edge(id).end()));
    if (static_cast<int>(c.core.size()) != ell || static_cast<int>(c.edges.size()) != ell)
        return false;
    for (int i = 0; i < ell; ++i) {
        if (!h.edge_contains(c.edges[i], c.core[i]) || !h.edge_contains(c.edges[i], c.core[(i + 1) % ell]))
            return false;
    }
    return oracle::is_berge_cycle(es);
}

} // namespace

TEST_SUITE("detectors")
{
    TEST_CASE("find_berge_cycle examples")
    {
        Hypergraph c4(3, 8, {{0, 1, 4}, {1, 2, 5}, {2, 3, 6}, {0, 3, 7}});
        auto w = find_berge_cycle(c4, 4);
        REQUIRE(w);
        CHECK(check_berge(c4, *w, 4));

        // A sunflower with kernel K holds Berge l-cycles only for l <= |K|.
        Hypergraph sun(3, 6, {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}, {0, 1, 5}});
        CHECK_FALSE(find_berge_cycle(sun, 4));
        CHECK(find_berge_cycle(sun, 2));
        CHECK_FALSE(find_berge_cycle(sun, 2, {true, std::nullopt}));
        CHECK(oracle::has_berge(sun.edge_list(), 2, false));
        CHECK_FALSE(oracle::has_berge(sun.edge_list(), 4, false));

        Hypergraph wide(5, 8, {{0, 1, 2, 3, 4}, {0, 1, 2, 3, 5}, {0, 1, 2, 3, 6}, {0, 1, 2, 3, 7}});
        CHECK(find_berge_cycle(wide, 4));
        CHECK_FALSE(find_berge_cycle(wide, 4, {true, std::nullopt}));

        CHECK_FALSE(find_berge_cycle(kFano, 2));
    }

    TEST_CASE("girth examples")
    {
        Hypergraph m(3, 6, {{0, 1, 2}, {3, 4, 5}});
        CHECK_FALSE(girth(m, 6));
        Hypergraph two(3, 4, {{0, 1, 2}, {0, 1, 3}});
        CHECK(girth(two, 6) == 2);
        Hypergraph c5(3, 10, {{0, 1, 5}, {1, 2, 6}, {2, 3, 7}, {3, 4, 8}, {0, 4, 9}});
        CHECK(girth(c5, 6) == 5);
        for (int l = 2; l <= 4; ++l)
            CHECK_FALSE(oracle::has_berge(c5.edge_list(), l, false));
    }

    TEST_CASE("sunflower kernels")
    {
        auto k = is_sunflower(Hypergraph(3, 9, {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}}));
        REQUIRE(k);
        CHECK(k->kernel.empty());
        k = is_sunflower(Hypergraph(3, 5, {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}}));
        REQUIRE(k);
        CHECK(k->kernel == std::vector<Vertex>{0, 1});
        CHECK_FALSE(is_sunflower(Hypergraph(3, 4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}})));
        auto single = is_sunflower(Hypergraph(3, 3, {{0, 1, 2}}));
        REQUIRE(single);
        CHECK(single->unconstrained);
    }

    TEST_CASE("sunflower plus examples")
    {
        Hypergraph sun(3, 5, {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}});
        CHECK_FALSE(is_sunflower_plus(sun, 4));
        Hypergraph f(3, 5, {{0, 1, 2}, {0, 1, 3}, {0, 2, 4}});
        auto w = is_sunflower_plus(f, 4);
        REQUIRE(w);
        // every edge can serve as the extra edge here
        CHECK(w->petals.size() == 2);
        CHECK(w->kernel == std::vector<Vertex>{0});
        CHECK(oracle::is_sunflower_plus(f.edge_list(), 4));
    }

    TEST_CASE("sunflower plus members are non-linear")
    {
        Rng rng(3);
        std::size_t seen = 0;
        for (int i = 0; i < 400; ++i) {
            auto h = random_small(rng, 3, 7, 5);
            if (!oracle::has_sunflower_plus(h.edge_list(), 4))
                continue;
            ++seen;
            CHECK_FALSE(oracle::is_linear(h.edge_list()));
        }
        CHECK(seen > 20);
    }

    TEST_CASE("loose cycles")
    {
        for (int l = 3; l <= 5; ++l) {
            auto c = loose_cycle(l, 3);
            CHECK(contains_loose_cycle(c, l));
            CHECK(count_loose_cycles(c, l) == 1);
            CHECK(oracle::is_loose_cycle(c.edge_list()));
        }
        Hypergraph sun(3, 8, {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {0, 7, 1}});
        Hypergraph sun2(3, 7, {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}, {0, 1, 5}, {0, 1, 6}});
        for (int l = 3; l <= 5; ++l) {
            CHECK_FALSE(contains_loose_cycle(sun2, l));
        }
        CHECK_FALSE(contains_loose_cycle(sun, 3));
        CHECK(contains_loose_cycle(oracle::complete(6, 3), 3));
        CHECK(count_loose_cycles(Hypergraph(3, 9, {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}}), 3) == 0);
        // brute-force values: 840 in K7, 120 in K6
        CHECK(count_loose_cycles(oracle::complete(7, 3), 3) == 840);
        CHECK(count_loose_cycles(oracle::complete(6, 3), 3) == 120);
    }

    TEST_CASE("F5 detection and counting")
    {
        auto f = f5();
        CHECK(count_f5(f) == 1);
        CHECK_FALSE(isomorphic(f5(), f5_variant()));
        CHECK_FALSE(oracle::same_shape(f5().edge_list(), f5_variant().edge_list()));
        CHECK(count_f5(kFano) == 0);
        // 45 = brute-force count of 4-edge subsets of K6 shaped like F5
        auto k6 = oracle::complete(6, 3);
        CHECK(oracle::count_shape(k6, f) == 45);
        CHECK(count_f5(k6) == 45);
        CHECK(count_copies(f5_variant(), k6) == 360);
    }

    TEST_CASE("counts agree with brute force on random hosts")
    {
        Rng rng(17);
        for (int i = 0; i < 40; ++i) {
            auto h = random_small(rng, 3, 7, 12);
            CHECK(count_f5(h) == oracle::count_shape(h, f5()));
            CHECK(count_loose_cycles(h, 3) == oracle::count_shape(h, loose_cycle(3, 3)));
        }
    }

    TEST_CASE("local isomorphism")
    {
        auto f = f5();
        CHECK(local_isomorphism(f, f));
        CHECK_FALSE(local_isomorphism(f, kFano));
        Hypergraph c5(2, 5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}});
        Hypergraph chord(2, 5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}, {0, 2}});
        auto chi = local_isomorphism(c5, chord);
        REQUIRE(chi);
        for (const auto& e : c5.edge_list()) {
            Edge img{(*chi)[e[0]], (*chi)[e[1]]};
            std::sort(img.begin(), img.end());
            CHECK(chord.has_edge(img));
        }
    }

    TEST_CASE("projection algebra")
    {
        for (int l = 3; l <= 5; ++l)
            CHECK(project_family(loose_cycle(l, 3), 2).empty());
        auto p = project_family(f5(), 2);
        REQUIRE(p.size() == 1);
        CHECK(isomorphic(p[0], Hypergraph(2, 4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}})));
        auto single = project_family(Hypergraph(3, 3, {{0, 1, 2}}), 2);
        REQUIRE(single.size() == 1);
        CHECK(single[0].uniformity() == 2);
        CHECK(single[0].edge_count() == 1);
        CHECK_THROWS_AS(project_family(oracle::complete(13, 3), 2), ResourceError);
    }

    TEST_CASE("detectors agree with exhaustive definitions")
    {
        Rng rng(99);
        for (int i = 0; i < 300; ++i) {
            const int r = 3 + static_cast<int>(rng.below(2));
            auto h = random_small(rng, r, 6 + rng.below(5), 5);
            const auto es = h.edge_list();
            for (int l = 2; l <= 5; ++l) {
                CHECK(find_berge_cycle(h, l).has_value() == oracle::has_berge(es, l, false));
                CHECK(find_berge_cycle(h, l, {true, std::nullopt}).has_value() == oracle::has_berge(es, l, true));
            }
            for (int l = 3; l <= 5; ++l)
                CHECK(contains_loose_cycle(h, l).has_value() == oracle::has_loose(es, l));
            CHECK(find_sunflower_plus(h).has_value() == oracle::has_sunflower_plus(es, 4));
        }
    }

    TEST_CASE("family grammar round trip")
    {
        for (std::string s : {"berge:4", "berge-upto:3", "berge-nosun:5", "berge-upto-nosun:4", "loose:3", "sunplus:4", "f5",
                              "berge-upto-nosun:4+sunplus:4", "berge-upto:2+berge:5"}) {
            CHECK(ForbiddenFamily::parse(s).to_string() == s);
        }
        auto pat = ForbiddenFamily::parse("pattern:3|0-1-2,0-1-3");
        CHECK(ForbiddenFamily::parse(pat.to_string()).to_string() == pat.to_string());
        CHECK_THROWS_AS(ForbiddenFamily::parse("berge:x"), InputError);
        CHECK_THROWS_AS(ForbiddenFamily::parse("triangle"), InputError);
        CHECK(ForbiddenFamily::none().to_string() == "none");
    }

    TEST_CASE("family membership agrees with brute force")
    {
        Rng rng(5);
        const auto berge = ForbiddenFamily::parse("berge-upto-nosun:4+sunplus:4");
        const auto loose = ForbiddenFamily::loose(4);
        const auto b5 = ForbiddenFamily::berge(5);
        for (int i = 0; i < 150; ++i) {
            auto h = random_small(rng, 3, 8, 6);
            const auto es = h.edge_list();
            const bool want = oracle::has_berge_upto(es, 4, true) || oracle::has_sunflower_plus(es, 4);
            auto w = find_member(h, berge);
            CHECK(w.has_value() == want);
            if (w)
                CHECK(validate_witness(h, berge, *w));
            CHECK(contains_member(h, loose) == oracle::has_loose(es, 4));
            CHECK(contains_member(h, b5) == oracle::has_berge(es, 5, false));
        }
    }

    TEST_CASE("every copy is visited and hitting them frees the host")
    {
        auto h = oracle::complete(6, 3);
        const auto family = ForbiddenFamily::f5();
        std::size_t copies = 0;
        for_each_copy(h, family, [&](std::span<const EdgeId>) { ++copies; });
        CHECK(copies == 45);
        CHECK_THROWS_AS(for_each_copy(h, family, [](std::span<const EdgeId>) {}, 10), ResourceError);
    }
}
