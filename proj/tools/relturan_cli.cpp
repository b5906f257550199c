#include "relturan/error.hpp"
#include "relturan/extractors.hpp"
#include "relturan/family.hpp"
#include "relturan/generators.hpp"
#include "relturan/harness.hpp"
#include "relturan/hg_io.hpp"
#include "relturan/oracle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>

using namespace relturan;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kVerification = 2, kResource = 3, kInput = 4 };

// A path to a .hg file, or a host spec such as complete:9,3.
Hypergraph load_host(const std::string& text)
{
    std::ifstream probe(text);
    if (probe)
        return read_hg_file(text);
    if (text.find(':') != std::string::npos || text == "fano")
        return generate(HostSpec::parse(text));
    throw InputError("no such host file '" + text + "'");
}

json witness_json(const Witness& w)
{
    json j;
    j["member"] = w.member;
    j["edges"] = w.edges();
    if (auto* b = std::get_if<BergeCycle>(&w.certificate)) {
        j["core"] = b->core;
        j["cycle_edges"] = b->edges;
    } else if (auto* p = std::get_if<PatternWitness>(&w.certificate)) {
        j["vertex_map"] = p->embedding.vertex_map;
        j["edge_map"] = p->embedding.edge_map;
    } else if (auto* s = std::get_if<SunflowerPlus>(&w.certificate)) {
        j["petals"] = s->petals;
        j["extra"] = s->extra;
        j["kernel"] = s->kernel;
    }
    return j;
}

void emit(const json& j, const std::string& path)
{
    if (path.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw ResourceError("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Certified family-free subgraphs of hypergraph hosts"};
    app.require_subcommand(1);
    // lets --cache follow the subcommand
    app.fallthrough();

    std::string cache_path;
    app.add_option("--cache", cache_path, "oracle cache file (default: $RELTURAN_CACHE)");

    auto* gen = app.add_subcommand("gen", "generate a host");
    std::string spec, gen_out;
    gen->add_option("--spec", spec, "complete:n,r | random:n,r,p,seed=S | linear:n,r,p,seed=S | sunflower:D,k,r | "
                                    "partite:a,b,.. | fano")
        ->required();
    gen->add_option("--out", gen_out, ".hg file (stdout when omitted)");

    auto* detect = app.add_subcommand("detect", "search a host for a family member");
    std::string det_family, det_input;
    detect->add_option("--family", det_family)->required();
    detect->add_option("--input", det_input, ".hg file or host spec")->required();

    auto* oracle = app.add_subcommand("oracle", "exact relative Turan number at small scale");
    std::string or_host, or_family, or_out;
    std::uint64_t or_budget = 5'000'000;
    oracle->add_option("--host", or_host, ".hg file or host spec")->required();
    oracle->add_option("--family", or_family)->required();
    oracle->add_option("--budget", or_budget, "branch-and-bound node limit");
    oracle->add_option("--out", or_out);

    auto* extract = app.add_subcommand("extract", "run a pipeline");
    std::string ex_pipeline, ex_host, ex_out, ex_report;
    int ex_ell = 4;
    ExtractorConfig cfg;
    std::optional<int> ex_t;
    std::optional<double> ex_p;
    extract->add_option("--pipeline", ex_pipeline)->required()->check(CLI::IsMember({"berge", "b53", "f5", "loose"}));
    extract->add_option("--ell", ex_ell);
    extract->add_option("--host", ex_host, ".hg file or host spec")->required();
    extract->add_option("--seed", cfg.seed);
    extract->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber);
    extract->add_option("--t", ex_t);
    extract->add_option("--p", ex_p)->check(CLI::Range(0.0, 1.0));
    extract->add_option("--c-t", cfg.c_t);
    extract->add_option("--jobs", cfg.jobs)->check(CLI::PositiveNumber);
    extract->add_option("--out", ex_out, "retained subgraph as .hg");
    extract->add_option("--report", ex_report, "report JSON (stdout when omitted)");

    auto* experiment = app.add_subcommand("experiment", "batch runs");
    experiment->require_subcommand(1);
    auto* run = experiment->add_subcommand("run", "run a plan");
    std::string plan_path, run_out;
    int run_jobs = 0;
    run->add_option("plan", plan_path)->required();
    run->add_option("--jobs", run_jobs);
    run->add_option("--out", run_out, "overrides the plan's output");
    auto* fit = experiment->add_subcommand("fit", "fit the density exponent of a result file");
    std::string fit_path;
    fit->add_option("results", fit_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInput;
    }

    try {
        std::unique_ptr<OracleCache> cache;
        if (cache_path.empty())
            cache_path = OracleCache::path_from_env().value_or("");
        if (!cache_path.empty())
            cache = std::make_unique<OracleCache>(cache_path);

        if (*gen) {
            const Hypergraph h = generate(HostSpec::parse(spec));
            if (gen_out.empty())
                write_hg(std::cout, h);
            else
                write_hg_file(gen_out, h);
            return kOk;
        }
        if (*detect) {
            const Hypergraph h = load_host(det_input);
            const auto family = ForbiddenFamily::parse(det_family);
            auto w = find_member(h, family);
            json j{{"family", family.to_string()}, {"found", w.has_value()}};
            if (w) {
                if (!validate_witness(h, family, *w))
                    throw VerificationError("witness failed re-validation");
                j["witness"] = witness_json(*w);
            }
            std::cout << j.dump(2) << '\n';
            return kOk;
        }
        if (*oracle) {
            const Hypergraph h = load_host(or_host);
            OracleOptions o;
            o.budget = or_budget;
            o.cache = cache.get();
            auto res = ex_relative(h, ForbiddenFamily::parse(or_family), o);
            json j = oracle_to_json(res);
            j["host"] = host_key(h);
            j["family"] = ForbiddenFamily::parse(or_family).to_string();
            emit(j, or_out);
            return kOk;
        }
        if (*extract) {
            const Hypergraph h = load_host(ex_host);
            cfg.t = ex_t;
            cfg.p_override = ex_p;
            cfg.oracle.cache = cache.get();
            auto report = run_pipeline(ex_pipeline, h, ex_ell, cfg);
            if (!ex_out.empty())
                write_hg_file(ex_out, report.retained);
            emit(report_to_json(report, ex_out.empty()), ex_report);
            return report.verified_free ? kOk : kVerification;
        }
        if (*run) {
            auto plan = ExperimentPlan::load(plan_path);
            if (run_jobs > 0)
                plan.jobs = run_jobs;
            if (!run_out.empty())
                plan.output = run_out;
            plan.config.oracle.cache = cache.get();
            auto summary = run_plan(plan);
            std::cerr << summary.records << " records (" << summary.reused << " resumed) -> " << summary.output
                      << ", " << summary.csv << '\n';
            if (summary.not_free)
                return kVerification;
            if (summary.resource_errors)
                return kResource;
            return kOk;
        }
        if (*fit) {
            auto f = fit_results(fit_path);
            for (const auto& w : f.warnings)
                std::cerr << "warning: " << w << '\n';
            std::cout << fit_to_json(f).dump(2) << '\n';
            return kOk;
        }
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInput;
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return kResource;
    } catch (const VerificationError& e) {
        std::cerr << "verification failed: " << e.what() << '\n';
        return kVerification;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kResource;
    }
    return kOk;
}
