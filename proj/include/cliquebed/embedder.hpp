#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cliquebed/contraction.hpp"
#include "cliquebed/graph.hpp"

namespace cliquebed {

// Logical problem graph on variables 0..n-1.
struct LogicalGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // normalized u < v, sorted
};

LogicalGraph complete_graph(int n);
LogicalGraph make_logical(int n, std::vector<std::pair<int, int>> edges);

// Embedding target: adjacency over dense node indices. Built from either a
// contracted graph (indices = pair indices) or a hardware graph (indices =
// node positions).
struct TargetGraph {
    std::vector<std::vector<std::uint32_t>> adj;  // sorted neighbor lists
    std::uint64_t hash = 0;

    std::size_t size() const { return adj.size(); }
    bool has_edge(std::uint32_t a, std::uint32_t b) const;
};

TargetGraph target_from(const ContractedGraph& cg);
TargetGraph target_from(const Graph& g);
std::uint64_t contracted_hash(const ContractedGraph& cg);

struct EmbedderParams {
    int tries = 10;
    int max_passes = 10;
    std::uint64_t seed = 0;
};

// Chains of target nodes per logical variable.
struct Embedding {
    std::map<int, std::vector<std::uint32_t>> chains;  // values sorted
    std::uint64_t target_hash = 0;
};

struct Violation {
    std::string kind;  // "empty_chain" | "unknown_node" | "overlap" |
                       // "disconnected" | "uncovered_edge"
    int var = -1, var2 = -1;
    long long node = -1;
};

struct EmbeddingNotFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Randomized chain-growth heuristic: variables are placed one at a time in
// a seeded random order; a variable's chain is the union of shortest paths
// from a root to each already placed neighbor chain under node weights
// exponential in current over-usage; improvement passes re-route chains
// until no target node is used twice, then reduction passes shrink chains.
Embedding find_embedding(const LogicalGraph& source, const TargetGraph& target,
                         const EmbedderParams& params = {});

std::vector<Violation> validate(const Embedding& emb, const LogicalGraph& source,
                                const TargetGraph& target);

struct ChainStats {
    double min = 0, mean = 0, stddev = 0, max = 0;
};

// Statistics over |chain| * qubits_per_node (2 for contracted targets).
ChainStats chain_length_stats(const Embedding& emb, int qubits_per_node);

void save_embedding(const Embedding& emb, const std::string& path);
Embedding load_embedding(const std::string& path);

}  // namespace cliquebed
