#ifndef RELTURAN_ORACLE_HPP
#define RELTURAN_ORACLE_HPP

#include "relturan/family.hpp"
#include "relturan/hypergraph.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>

namespace relturan {

class OracleCache;

struct OracleOptions {
    // Branch-and-bound node limit; exhausting it returns the incumbent flagged inexact.
    std::uint64_t budget = 5'000'000;
    // Hosts with more edges than this skip the exact search (relative mode).
    std::size_t exact_edge_ceiling = 30;
    // Complete hosts with more than this many edges skip it (classical mode);
    // 84 = C(9, 3).
    std::size_t classical_edge_ceiling = 84;
    // Inexact mode: randomised greedy restarts, each followed by swap local search.
    int restarts = 32;
    std::uint64_t seed = 0x5eed;
    // Optional persistent cache; results are also memoised in-process.
    OracleCache* cache = nullptr;
};

struct OracleResult {
    std::size_t optimum = 0;
    Hypergraph witness;
    bool proved_exact = false;
    std::uint64_t nodes = 0;
};

// Maximum number of edges in a family-free subgraph of `host`.
OracleResult ex_relative(const Hypergraph& host, const ForbiddenFamily& family, const OracleOptions& options = {});

// The same with host = complete r-graph on t vertices.
OracleResult ex_classical(int t, int r, const ForbiddenFamily& family, const OracleOptions& options = {});

// Witness of ex_classical on vertex range [0, t); empty when t < r.
Hypergraph extremal_target(int t, int r, const ForbiddenFamily& family, const OracleOptions& options = {});

// Key fragment for a host: "complete:t,r" or "hg:r,n,m,<fnv1a of the .hg text>".
std::string host_key(const Hypergraph& host);

/**
 * Append-only JSON-lines cache. Each line holds a key and a result; on load
 * the last line for a key wins. Writes are serialised by a mutex.
 */
class OracleCache {
public:
    explicit OracleCache(std::string path);

    // RELTURAN_CACHE names the file; nullptr-equivalent (no cache) when unset.
    static std::optional<std::string> path_from_env();

    std::optional<OracleResult> lookup(const std::string& key) const;
    void store(const std::string& key, const OracleResult& result);
    const std::string& path() const { return path_; }

private:
    std::string path_;
    mutable std::mutex mutex_;
    std::map<std::string, OracleResult> entries_;
};

} // namespace relturan

#endif
