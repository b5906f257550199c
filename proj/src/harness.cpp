#include "relturan/harness.hpp"

#include "relturan/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace relturan {

namespace fs = std::filesystem;
using nlohmann::json;

ExperimentPlan ExperimentPlan::from_json(const json& j)
{
    try {
        ExperimentPlan plan;
        if (!j.contains("hosts") || !j.contains("pipeline") || !j.contains("output"))
            throw InputError("plan needs hosts, pipeline and output");
        for (const auto& h : j.at("hosts"))
            plan.hosts.push_back(HostSpec::parse(h.get<std::string>()));
        plan.pipeline = j.at("pipeline").get<std::string>();
        pipeline_family(plan.pipeline, 4); // rejects unknown names
        plan.ell = j.value("ell", plan.ell);
        if (j.contains("seeds")) {
            plan.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
            if (plan.seeds.empty())
                throw InputError("plan has no seeds");
        }
        plan.trials = j.value("trials", plan.trials);
        if (plan.trials < 1)
            throw InputError("trials must be at least 1");
        plan.output = j.at("output").get<std::string>();
        if (plan.output.empty())
            throw InputError("empty output path");
        plan.oracle_compare = j.value("oracle_compare", false);
        plan.append = j.value("append", false);
        plan.jobs = std::max(1, j.value("jobs", 1));
        if (j.contains("t"))
            plan.config.t = j.at("t").get<int>();
        plan.config.c_t = j.value("c_t", plan.config.c_t);
        plan.config.t_max = j.value("t_max", plan.config.t_max);
        if (j.contains("p"))
            plan.config.p_override = j.at("p").get<double>();
        if (j.contains("thresholds"))
            plan.config.thresholds = j.at("thresholds").get<std::map<std::string, double>>();
        plan.config.trials = plan.trials;
        return plan;
    } catch (const json::exception& e) {
        throw InputError(std::string("bad plan: ") + e.what());
    }
}

ExperimentPlan ExperimentPlan::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot read plan '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError("plan '" + path + "' is not valid JSON: " + e.what());
    }
    return from_json(j);
}

std::string record_key(const HostSpec& host, const std::string& pipeline, int ell, std::uint64_t seed)
{
    std::string key = host.to_string() + "|" + pipeline;
    if (pipeline == "berge" || pipeline == "loose")
        key += ":" + std::to_string(ell);
    return key + "|seed=" + std::to_string(seed);
}

json report_to_json(const ExtractionReport& report, bool with_edges)
{
    json j;
    j["family"] = report.family;
    j["input_edges"] = report.input_edges;
    j["max_degree"] = report.input_profile.max_degree;
    j["guarantee"] = report.guarantee;
    j["achieved"] = report.achieved;
    j["verified"] = report.verified;
    j["verified_free"] = report.verified_free;
    j["trial_log"] = report.trial_log;
    j["flags"] = report.flags;
    j["stats"] = report.stats;
    j["parameters"] = report.parameters;
    json trace = json::array();
    for (const auto& s : report.trace)
        trace.push_back({{"stage", s.stage}, {"input_edges", s.input_edges}, {"output_edges", s.output_edges},
                         {"values", s.values}, {"notes", s.notes}});
    j["trace"] = trace;
    if (with_edges) {
        json edges = json::array();
        for (const auto& e : report.retained.edge_list())
            edges.push_back(e);
        j["retained"] = {{"r", report.retained.uniformity()}, {"n", report.retained.vertex_count()}, {"edges", edges}};
    }
    return j;
}

json oracle_to_json(const OracleResult& result)
{
    json edges = json::array();
    for (const auto& e : result.witness.edge_list())
        edges.push_back(e);
    return {{"optimum", result.optimum}, {"proved_exact", result.proved_exact}, {"nodes", result.nodes},
            {"witness", edges}};
}

namespace {

std::string csv_path(const std::string& output)
{
    const std::string ext = ".jsonl";
    if (output.size() > ext.size() && output.compare(output.size() - ext.size(), ext.size(), ext) == 0)
        return output.substr(0, output.size() - ext.size()) + ".csv";
    return output + ".csv";
}

// key -> line for every complete record line of a file
std::map<std::string, std::string> read_records(const std::string& path, std::vector<std::string>* order = nullptr)
{
    std::map<std::string, std::string> out;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (in.eof())
            break; // no trailing newline: torn write
        try {
            auto j = json::parse(line);
            auto key = j.at("key").get<std::string>();
            if (out.emplace(key, line).second && order)
                order->push_back(key);
        } catch (const json::exception&) {
            continue;
        }
    }
    return out;
}

struct Job {
    const HostSpec* host;
    std::uint64_t seed;
    std::string key;
};

std::string run_record(const ExperimentPlan& plan, const Job& job, bool& free_out, bool& resource_out)
{
    json rec;
    rec["key"] = job.key;
    rec["host"] = job.host->to_string();
    rec["pipeline"] = plan.pipeline;
    rec["ell"] = plan.ell;
    rec["seed"] = job.seed;
    rec["trials"] = plan.trials;
    free_out = true;
    resource_out = false;
    try {
        const Hypergraph h = generate(*job.host);
        const auto profile = degree_profile(h);
        rec["delta"] = profile.max_degree;
        rec["edges"] = h.edge_count();
        ExtractorConfig cfg = plan.config;
        cfg.seed = job.seed;
        cfg.trials = plan.trials;
        cfg.jobs = 1;
        auto report = run_pipeline(plan.pipeline, h, plan.ell, cfg);
        rec["achieved"] = report.achieved;
        rec["ratio"] = h.edge_count() ? static_cast<double>(report.achieved) / h.edge_count() : 0.0;
        rec["verified_free"] = report.verified_free;
        rec["report"] = report_to_json(report);
        free_out = report.verified_free;
        if (plan.oracle_compare && h.edge_count() <= kOracleCompareCeiling) {
            auto res = ex_relative(h, pipeline_family(plan.pipeline, plan.ell));
            rec["oracle"] = oracle_to_json(res);
            rec["sandwich_ok"] = report.achieved <= res.optimum;
        }
    } catch (const ResourceError& e) {
        rec["error"] = std::string("resource: ") + e.what();
        rec["verified_free"] = false;
        resource_out = true;
        free_out = true;
    } catch (const VerificationError& e) {
        rec["error"] = std::string("verification: ") + e.what();
        rec["verified_free"] = false;
        free_out = false;
    }
    return rec.dump();
}

void write_csv(const std::string& path, const std::vector<std::string>& lines)
{
    const std::string tmp = path + ".partial";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw ResourceError("cannot write '" + tmp + "'");
        out << "key,delta,edges,achieved,ratio\n";
        for (const auto& line : lines) {
            auto j = json::parse(line);
            if (!j.contains("achieved"))
                continue;
            out << '"' << j["key"].get<std::string>() << '"' << ',' << j["delta"].dump() << ','
                << j["edges"].dump() << ',' << j["achieved"].dump() << ',' << j["ratio"].dump() << '\n';
        }
        if (!out)
            throw ResourceError("write to '" + tmp + "' failed");
    }
    fs::rename(tmp, path);
}

} // namespace

RunSummary run_plan(const ExperimentPlan& plan)
{
    RunSummary summary;
    summary.output = plan.output;
    summary.csv = csv_path(plan.output);
    const std::string partial = plan.output + ".partial";

    std::vector<std::string> prior_order;
    std::map<std::string, std::string> prior;
    if (fs::exists(plan.output)) {
        if (!plan.append)
            throw InputError("output '" + plan.output + "' exists; set append to extend it");
        prior = read_records(plan.output, &prior_order);
    }
    auto resumed = read_records(partial);

    std::vector<Job> jobs;
    std::set<std::string> seen;
    for (const auto& host : plan.hosts)
        for (auto seed : plan.seeds) {
            auto key = record_key(host, plan.pipeline, plan.ell, seed);
            if (prior.count(key) || !seen.insert(key).second)
                continue;
            jobs.push_back({&host, seed, std::move(key)});
        }

    std::vector<std::optional<std::string>> lines(jobs.size());
    std::vector<char> not_free(jobs.size(), 0), resource(jobs.size(), 0);
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        auto it = resumed.find(jobs[i].key);
        if (it != resumed.end()) {
            lines[i] = it->second;
            auto j = json::parse(it->second);
            not_free[i] = !j.value("verified_free", false) && !j.contains("error");
            resource[i] = j.contains("error") && j["error"].get<std::string>().rfind("resource", 0) == 0;
            ++summary.reused;
        }
    }

    std::ofstream out(partial, std::ios::trunc);
    if (!out)
        throw ResourceError("cannot write '" + partial + "'");
    for (const auto& key : prior_order)
        out << prior[key] << '\n';

    // Workers fill `lines`; this thread writes them in plan order.
    std::mutex mutex;
    std::condition_variable ready;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next++;
            if (i >= jobs.size())
                return;
            {
                std::lock_guard lock(mutex);
                if (lines[i])
                    continue;
            }
            bool free = true, res = false;
            std::string line = run_record(plan, jobs[i], free, res);
            std::lock_guard lock(mutex);
            lines[i] = std::move(line);
            not_free[i] = !free;
            resource[i] = res;
            ready.notify_all();
        }
    };
    std::vector<std::thread> pool;
    const int workers = std::max(1, std::min<int>(plan.jobs, static_cast<int>(jobs.size())));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back(worker);
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        std::unique_lock lock(mutex);
        ready.wait(lock, [&] { return lines[i].has_value(); });
        out << *lines[i] << '\n';
        out.flush();
        summary.not_free += not_free[i];
        summary.resource_errors += resource[i];
    }
    for (auto& t : pool)
        t.join();
    out.close();
    if (!out)
        throw ResourceError("write to '" + partial + "' failed");
    fs::rename(partial, plan.output);
    summary.records = prior_order.size() + jobs.size();

    std::vector<std::string> all;
    for (const auto& key : prior_order)
        all.push_back(prior[key]);
    for (auto& l : lines)
        all.push_back(*l);
    write_csv(summary.csv, all);
    return summary;
}

ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& points, std::optional<double> reference)
{
    ExponentFit fit;
    fit.reference = reference;
    for (const auto& [d, ratio] : points) {
        if (d > 0 && ratio > 0 && std::isfinite(d) && std::isfinite(ratio))
            fit.points.emplace_back(d, ratio);
        else
            fit.warnings.push_back("dropped point (" + std::to_string(d) + ", " + std::to_string(ratio) + ")");
    }
    if (fit.points.size() < 3)
        throw InputError("an exponent fit needs at least 3 points with positive density");
    const double n = static_cast<double>(fit.points.size());
    double sx = 0, sy = 0;
    for (const auto& [d, ratio] : fit.points) {
        sx += std::log(d);
        sy += std::log(ratio);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (const auto& [d, ratio] : fit.points) {
        sxx += (std::log(d) - mx) * (std::log(d) - mx);
        sxy += (std::log(d) - mx) * (std::log(ratio) - my);
    }
    if (sxx == 0)
        throw InputError("all points share one Delta; slope undefined");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0;
    for (const auto& [d, ratio] : fit.points) {
        const double res = std::log(ratio) - fit.intercept - fit.slope * std::log(d);
        rss += res * res;
    }
    fit.stderr_slope = n > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
    return fit;
}

std::optional<double> reference_exponent(const std::string& pipeline, int ell, int r, bool linear_host)
{
    if (pipeline == "berge")
        return -1.0 + 1.0 / ((r - 1) * (ell / 2));
    if (pipeline == "b53")
        return -0.75;
    if (pipeline == "f5")
        return -0.6;
    if (pipeline == "loose")
        return linear_host ? -1.0 + 1.0 / (ell - 1) : -1.0 + 1.0 / ell;
    return std::nullopt;
}

ExponentFit fit_results(const std::string& path)
{
    if (!fs::exists(path))
        throw InputError("no result file '" + path + "'");
    std::vector<std::string> order;
    auto records = read_records(path, &order);
    std::map<std::string, std::pair<double, double>> best; // host -> (delta, ratio)
    std::vector<std::string> hosts;
    std::string pipeline;
    int ell = 0, r = 3;
    bool linear = true;
    for (const auto& key : order) {
        auto j = json::parse(records[key]);
        if (!j.contains("ratio"))
            continue;
        const auto host = j["host"].get<std::string>();
        pipeline = j["pipeline"].get<std::string>();
        ell = j["ell"].get<int>();
        const auto spec = HostSpec::parse(host);
        r = spec.r;
        linear = linear && spec.kind == HostKind::LinearRandom;
        const double d = j["delta"].get<double>(), ratio = j["ratio"].get<double>();
        auto it = best.find(host);
        if (it == best.end()) {
            best[host] = {d, ratio};
            hosts.push_back(host);
        } else {
            it->second.second = std::max(it->second.second, ratio);
        }
    }
    std::vector<std::pair<double, double>> points;
    for (const auto& h : hosts)
        points.push_back(best[h]);
    return fit_exponent(points, pipeline.empty() ? std::nullopt : reference_exponent(pipeline, ell, r, linear));
}

json fit_to_json(const ExponentFit& fit)
{
    json pts = json::array();
    for (const auto& [d, ratio] : fit.points)
        pts.push_back({d, ratio});
    json j{{"points", pts}, {"slope", fit.slope}, {"intercept", fit.intercept}, {"stderr", fit.stderr_slope},
           {"warnings", fit.warnings}};
    j["reference"] = fit.reference ? json(*fit.reference) : json(nullptr);
    return j;
}

} // namespace relturan
