#include "relturan/error.hpp"
#include "relturan/harness.hpp"
#include "relturan/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace relturan;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string scratch(const std::string& name)
{
    auto dir = fs::temp_directory_path() / "relturan_harness_test";
    fs::create_directories(dir);
    auto p = (dir / name).string();
    fs::remove(p);
    fs::remove(p + ".partial");
    return p;
}

ExperimentPlan clique_plan(const std::string& out)
{
    nlohmann::json j{{"hosts", nlohmann::json::array()}, {"pipeline", "berge"}, {"ell", 4},
                     {"seeds", {1}},                     {"trials", 50},        {"output", out}};
    for (int n = 6; n <= 12; ++n)
        j["hosts"].push_back("complete:" + std::to_string(n) + ",3");
    return ExperimentPlan::from_json(j);
}

} // namespace

TEST_SUITE("harness")
{
    TEST_CASE("exponent fit on synthetic data")
    {
        std::vector<std::pair<double, double>> exact, flat, noisy;
        Rng rng(12);
        for (double d : {4.0, 9.0, 16.0, 25.0, 49.0, 100.0}) {
            exact.emplace_back(d, std::pow(d, -0.5));
            flat.emplace_back(d, 0.3);
            noisy.emplace_back(d, std::pow(d, -0.75) * (1 + 0.01 * (2 * rng.uniform() - 1)));
        }
        CHECK(std::abs(fit_exponent(exact).slope + 0.5) <= 1e-9);
        CHECK(std::abs(fit_exponent(flat).slope) <= 1e-12);
        CHECK(std::abs(fit_exponent(noisy).slope + 0.75) <= 0.02);

        exact.emplace_back(200.0, 0.0);
        auto f = fit_exponent(exact, -0.5);
        CHECK(f.points.size() == 6);
        CHECK(f.warnings.size() == 1);
        CHECK(f.reference == -0.5);
        CHECK_THROWS_AS(fit_exponent({{2, 1}, {3, 1}}), InputError);
    }

    TEST_CASE("reference exponents")
    {
        CHECK(*reference_exponent("berge", 4, 3, false) == doctest::Approx(-0.75));
        CHECK(*reference_exponent("berge", 3, 3, false) == doctest::Approx(-0.5));
        CHECK(*reference_exponent("berge", 4, 4, false) == doctest::Approx(-5.0 / 6));
        CHECK(*reference_exponent("f5", 0, 3, false) == doctest::Approx(-0.6));
        CHECK(*reference_exponent("loose", 4, 3, true) == doctest::Approx(-2.0 / 3));
        CHECK(*reference_exponent("loose", 4, 3, false) == doctest::Approx(-0.75));
        CHECK(*reference_exponent("b53", 5, 3, false) == doctest::Approx(-0.75));
    }

    TEST_CASE("empty sweep writes an empty file")
    {
        auto out = scratch("empty.jsonl");
        auto plan = ExperimentPlan::from_json({{"hosts", nlohmann::json::array()}, {"pipeline", "f5"}, {"output", out}});
        auto s = run_plan(plan);
        CHECK(s.records == 0);
        CHECK(fs::exists(out));
        CHECK(slurp(out).empty());
    }

    TEST_CASE("clique sweep, determinism and resume")
    {
        auto a = scratch("a.jsonl");
        auto s = run_plan(clique_plan(a));
        CHECK(s.records == 7);
        CHECK(s.not_free == 0);
        std::istringstream lines(slurp(a));
        std::string line;
        int count = 0;
        while (std::getline(lines, line)) {
            auto j = nlohmann::json::parse(line);
            CHECK(j["verified_free"].get<bool>());
            ++count;
        }
        CHECK(count == 7);
        CHECK(slurp(s.csv).rfind("key,delta,edges,achieved,ratio\n", 0) == 0);

        auto b = scratch("b.jsonl");
        auto plan_b = clique_plan(b);
        plan_b.jobs = 3;
        run_plan(plan_b);
        CHECK(slurp(a) == slurp(b));

        // interrupted run: keep the first three records plus a torn line
        auto c = scratch("c.jsonl");
        {
            std::istringstream in(slurp(a));
            std::ofstream partial(c + ".partial");
            for (int i = 0; i < 3 && std::getline(in, line); ++i)
                partial << line << '\n';
            partial << "{\"key\": \"complete:9";
        }
        auto resumed = run_plan(clique_plan(c));
        CHECK(resumed.reused == 3);
        CHECK(slurp(c) == slurp(a));
        CHECK_FALSE(fs::exists(c + ".partial"));

        CHECK_THROWS_AS(run_plan(clique_plan(a)), InputError);
        auto again = clique_plan(a);
        again.append = true;
        CHECK(run_plan(again).records == 7);
        CHECK(slurp(a) == slurp(b));
    }

    TEST_CASE("fit of a result file")
    {
        auto out = scratch("fit.jsonl");
        run_plan(clique_plan(out));
        auto f = fit_results(out);
        CHECK(f.points.size() >= 3);
        CHECK(std::isfinite(f.slope));
        CHECK(f.reference == doctest::Approx(-0.75));
    }

    TEST_CASE("plan validation")
    {
        CHECK_THROWS_AS(ExperimentPlan::from_json({{"hosts", {"complete:6,3"}}, {"pipeline", "nope"}, {"output", "x"}}),
                        InputError);
        CHECK_THROWS_AS(ExperimentPlan::from_json({{"hosts", {"bad"}}, {"pipeline", "f5"}, {"output", "x"}}), InputError);
        CHECK_THROWS_AS(ExperimentPlan::from_json({{"pipeline", "f5"}, {"output", "x"}}), InputError);
    }
}
