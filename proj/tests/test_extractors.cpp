#include "oracles.hpp"

#include "relturan/error.hpp"
#include "relturan/extractors.hpp"
#include "relturan/generators.hpp"
#include "relturan/oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace relturan;

namespace {

Partition parts(std::vector<int> part_of, int count)
{
    Partition p;
    p.part_of = std::move(part_of);
    p.part_count = count;
    return p;
}

ExtractorConfig config(std::uint64_t seed, int trials)
{
    ExtractorConfig c;
    c.seed = seed;
    c.trials = trials;
    return c;
}

bool has_note(const ExtractionReport& r, const std::string& stage, const std::string& note)
{
    for (const auto& s : r.trace)
        if (s.stage == stage && std::find(s.notes.begin(), s.notes.end(), note) != s.notes.end())
            return true;
    return false;
}

ExtractorConfig identity_cfg() { return config(1, 1); }

ExtractionReport identity(const Hypergraph& g, const ExtractorConfig&)
{
    ExtractionReport r;
    r.input_edges = g.edge_count();
    r.retained = g;
    return r;
}

} // namespace

TEST_SUITE("extractors")
{
    TEST_CASE("random_hom into a complete target")
    {
        auto h = oracle::complete(7, 3);
        const int t = 6;
        auto j = oracle::complete(t, 3);
        auto rep = random_hom_extract(h, j, ForbiddenFamily::none(), config(3, 2000));
        CHECK(rep.retained.is_subgraph_of(h));
        // injectivity alone: 3! C(6,3) / 6^3
        const double pa = 6.0 * 20 / 216;
        CHECK(rep.stats["injective_expected"] == doctest::Approx(pa));
        CHECK(std::abs(rep.stats["injective_rate"] - pa) <= 3 * std::sqrt(pa * (1 - pa) / (2000.0 * 35)) + 1e-12);
        CHECK(rep.trial_log.size() == 2000);
    }

    TEST_CASE("random_hom on a single edge")
    {
        Hypergraph h(3, 3, {{0, 1, 2}});
        Hypergraph j(3, 5, {{0, 1, 2}, {2, 3, 4}});
        auto rep = random_hom_extract(h, j, ForbiddenFamily::none(), config(9, 4000));
        CHECK(rep.achieved <= 1);
        const double pa = 6.0 * 2 / 125;
        CHECK(std::abs(rep.stats["injective_rate"] - pa) <= 3 * std::sqrt(pa * (1 - pa) / 4000));
        CHECK(std::abs(rep.stats["mean_trial"] - pa) <= 3 * std::sqrt(pa * (1 - pa) / 4000));
    }

    TEST_CASE("random_hom from K6 into C5 keeps girth at least 5")
    {
        auto h = oracle::complete(6, 2);
        Hypergraph c5(2, 5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}});
        const auto family = ForbiddenFamily::berge_upto(4);
        for (std::uint64_t s = 1; s <= 1000; ++s) {
            auto rep = random_hom_extract(h, c5, family, config(s, 1));
            CHECK_FALSE(oracle::has_berge_upto(rep.retained.edge_list(), 4, false));
        }
    }

    TEST_CASE("random_hom input errors")
    {
        auto h = oracle::complete(5, 3);
        CHECK_THROWS_AS(random_hom_extract(h, oracle::complete(4, 2), ForbiddenFamily::none(), config(1, 1)), InputError);
        CHECK_THROWS_AS(random_hom_extract(h, Hypergraph(3, 2), ForbiddenFamily::none(), config(1, 1)), InputError);
        CHECK_THROWS_AS(random_hom_extract(h, oracle::complete(4, 3), ForbiddenFamily::none(), config(1, 0)), InputError);
    }

    TEST_CASE("codegree_split examples")
    {
        auto h = generate(HostSpec::parse("partite:2,3,3"));
        auto p = parts({0, 0, 1, 1, 1, 2, 2, 2}, 3);
        auto all = codegree_split(h, p, 2, 1);
        CHECK(all.heavy.size() == h.edge_count());
        CHECK(all.light.empty());
        auto none = codegree_split(h, p, 2, static_cast<double>(degree_profile(h).delta(2)) + 1);
        CHECK(none.heavy.empty());
        CHECK(none.light.size() == h.edge_count());

        auto sun = generate(HostSpec::sunflower(6, 2, 3));
        std::vector<int> po(sun.vertex_count(), 2);
        po[0] = 0;
        po[1] = 1;
        auto split = codegree_split(sun, parts(po, 3), 2, 6);
        CHECK(split.heavy.size() == 6);
        CHECK_THROWS_AS(codegree_split(sun, parts(std::vector<int>(sun.vertex_count(), 0), 3), 2, 1), InputError);
    }

    TEST_CASE("dyadic_select picks the largest class")
    {
        // pair (0,2) has degree 10, pair (1,3) degree 3; D = 2 puts them in classes 2 and 0
        std::vector<Edge> es;
        for (Vertex c = 4; c < 14; ++c)
            es.push_back({0, 2, c});
        for (Vertex c = 14; c < 17; ++c)
            es.push_back({1, 3, c});
        Hypergraph h(3, 17, es);
        std::vector<int> po(17, 2);
        po[0] = po[1] = 0;
        po[2] = po[3] = 1;
        auto sel = dyadic_select(h, parts(po, 3), 2, 2);
        CHECK(sel.edges.size() == 10);
        CHECK(sel.d_prime == 8);
        CHECK(sel.j == 2);
        CHECK(sel.index_set == std::vector<int>{0, 1});

        auto reg = generate(HostSpec::parse("partite:3,3,3"));
        auto rp = parts({0, 0, 0, 1, 1, 1, 2, 2, 2}, 3);
        auto one = dyadic_select(reg, rp, 2, 3);
        CHECK(one.j == 0);
        CHECK(one.d_prime == 3);
        CHECK(one.edges.size() == 27);
        CHECK_THROWS_AS(dyadic_select(reg, rp, 2, 4), InputError);
    }

    TEST_CASE("matching_extract with identity inner keeps a prefix matching host")
    {
        Hypergraph h(3, 9, {{0, 3, 6}, {1, 4, 7}, {2, 5, 8}});
        auto p = parts({0, 0, 0, 1, 1, 1, 2, 2, 2}, 3);
        auto rep = matching_extract(h, p, 2, 1, ForbiddenFamily::loose(3), identity, identity_cfg());
        CHECK(rep.retained.same_edge_set(h));
        CHECK(rep.verified_free);
    }

    TEST_CASE("matching_extract certifies loose and F5 freeness")
    {
        auto h = generate(HostSpec::parse("partite:3,3,3"));
        auto p = parts({0, 0, 0, 1, 1, 1, 2, 2, 2}, 3);
        for (std::uint64_t s = 1; s <= 20; ++s) {
            auto loose = matching_extract(h, p, 2, 2, ForbiddenFamily::loose(3), identity, config(s, 10));
            CHECK(loose.verified_free);
            CHECK_FALSE(oracle::has_loose(loose.retained.edge_list(), 3));
            InnerExtractor c4free = [](const Hypergraph& g, const ExtractorConfig& c) { return pipeline_berge(g, 4, c); };
            auto f5 = matching_extract(h, p, 2, 2, ForbiddenFamily::f5(), c4free, config(s, 10));
            CHECK(f5.verified_free);
            CHECK(count_f5(f5.retained) == 0);
        }
        MatchingOptions strict;
        CHECK_THROWS_AS(matching_extract(h, p, 2, 1, ForbiddenFamily::loose(3), identity, config(1, 1), strict), InputError);
    }

    TEST_CASE("deletion_extract examples")
    {
        Hypergraph m(3, 9, {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}});
        auto same = deletion_extract(m, ForbiddenFamily::loose(3), 1.0, config(1, 3));
        CHECK(same.retained.same_edge_set(m));
        auto one = deletion_extract(f5(), ForbiddenFamily::f5(), 1.0, config(1, 3));
        CHECK(one.achieved == 3);
        CHECK(one.verified_free);
        CHECK_THROWS_AS(deletion_extract(m, ForbiddenFamily::f5(), 0.0, config(1, 1)), InputError);
        CHECK_THROWS_AS(deletion_extract(m, ForbiddenFamily::f5(), 1.5, config(1, 1)), InputError);
        ExtractorConfig tiny = config(1, 1);
        tiny.copy_budget = 5;
        CHECK_THROWS_AS(deletion_extract(oracle::complete(7, 3), ForbiddenFamily::f5(), 1.0, tiny), ResourceError);
    }

    TEST_CASE("F5 pipeline light branch meets the deletion expectation")
    {
        auto h = generate(HostSpec::parse("random:30,3,0.05,seed=3"));
        auto rep = pipeline_f5(h, config(4, 1000));
        CHECK(rep.verified_free);
        CHECK(has_note(rep, "codegree_split", "light"));
        CHECK(rep.stats["mean_sampled_minus_copies"] >= rep.stats["closed_form_bound"]);
    }

    TEST_CASE("pipelines certify freeness on assorted hosts")
    {
        for (std::string spec : {"complete:7,3", "complete:9,3", "random:20,3,0.1,seed=2", "sunflower:8,2,3", "linear:25,3,0.2,seed=4"}) {
            auto h = generate(HostSpec::parse(spec));
            for (std::string name : {"berge", "b53", "f5", "loose"}) {
                for (int ell : {3, 4}) {
                    if ((name == "b53" || name == "f5") && ell == 4)
                        continue;
                    auto rep = run_pipeline(name, h, ell, config(7, 100));
                    INFO(spec << " " << name << " " << ell);
                    CHECK(rep.verified);
                    CHECK(rep.verified_free);
                    CHECK(rep.retained.is_subgraph_of(h));
                    CHECK(rep.achieved == rep.retained.edge_count());
                    CHECK_FALSE(contains_member(rep.retained, pipeline_family(name, ell)));
                }
            }
        }
    }

    TEST_CASE("berge pipeline on graphs and sunflowers")
    {
        auto g = oracle::complete(9, 2);
        auto rep = pipeline_berge(g, 4, config(1, 200));
        CHECK(rep.verified_free);
        CHECK_FALSE(oracle::has_berge_upto(rep.retained.edge_list(), 4, false));
        CHECK_THROWS_AS(pipeline_berge(g, 2, config(1, 1)), InputError);

        auto sun = generate(HostSpec::sunflower(10, 2, 3));
        auto srep = pipeline_berge(sun, 4, config(1, 200));
        CHECK(srep.verified_free);
        CHECK_FALSE(oracle::has_berge_upto(srep.retained.edge_list(), 4, true));
    }

    TEST_CASE("pipeline output stays below the oracle optimum")
    {
        auto h = oracle::complete(7, 3);
        for (std::string name : {"berge", "b53", "f5", "loose"}) {
            auto rep = run_pipeline(name, h, 4, config(2, 200));
            auto opt = ex_relative(h, pipeline_family(name, 4));
            REQUIRE(opt.proved_exact);
            CHECK(rep.achieved <= opt.optimum);
        }
    }

    TEST_CASE("branch choice")
    {
        // Delta_2 <= Delta^{1/2}: light
        auto lin = generate(HostSpec::parse("linear:25,3,0.2,seed=4"));
        auto b = pipeline_b53(lin, config(1, 50));
        CHECK(has_note(b, "codegree_split", "light"));
        // kernel pair of degree Delta: heavy
        auto sun = generate(HostSpec::sunflower(9, 2, 3));
        auto s = pipeline_b53(sun, config(1, 50));
        CHECK(has_note(s, "codegree_split", "heavy"));
        CHECK(s.verified_free);
    }

    TEST_CASE("loose pipeline on a linear host uses the linear probability")
    {
        auto h = generate(HostSpec::parse("linear:40,3,0.2,seed=1"));
        auto rep = pipeline_loose(h, 4, config(1, 50));
        CHECK(has_note(rep, "codegree_split", "light"));
        CHECK(rep.parameters["D_effective"] == 1);
        const double delta = static_cast<double>(degree_profile(h).max_degree);
        CHECK(rep.parameters["p"] == doctest::Approx(std::pow(3.0, -1 - 2.0 / 3) * std::pow(delta, -1 + 1.0 / 3)));
        CHECK(rep.verified_free);
    }

    TEST_CASE("degenerate hosts return the oracle answer")
    {
        Hypergraph h(3, 5, {{0, 1, 2}, {0, 1, 3}});
        auto rep = pipeline_berge(h, 4, config(1, 10));
        CHECK(std::find(rep.flags.begin(), rep.flags.end(), "degenerate_host") != rep.flags.end());
        CHECK(rep.achieved == 2);
    }

    TEST_CASE("results do not depend on the number of worker threads")
    {
        auto h = oracle::complete(10, 3);
        auto a = pipeline_f5(h, config(5, 300));
        ExtractorConfig c = config(5, 300);
        c.jobs = 3;
        auto b = pipeline_f5(h, c);
        CHECK(a.retained == b.retained);
        CHECK(a.trial_log == b.trial_log);
        CHECK(a.stats == b.stats);
    }
}
