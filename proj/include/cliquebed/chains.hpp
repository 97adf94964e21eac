#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cliquebed/contraction.hpp"
#include "cliquebed/embedder.hpp"
#include "cliquebed/graph.hpp"

namespace cliquebed {

enum class ChainKind { four_clique, linear };

std::string chain_kind_name(ChainKind k);
ChainKind chain_kind_from(const std::string& name);

// An embedding written in hardware qubits. For kind=four_clique each chain
// carries both qubits of every contracted pair; kind=linear keeps one qubit
// per pair. intra_couplers are the hardware edges inside a chain (these
// receive the chain strength); logical_edge_couplers lists, per logical
// edge, the hardware edges that realize it.
struct PhysicalEmbedding {
    ChainKind kind = ChainKind::four_clique;
    std::map<int, std::vector<QubitId>> chains;
    std::map<int, std::vector<QubitEdge>> intra_couplers;
    std::map<std::pair<int, int>, std::vector<QubitEdge>> logical_edge_couplers;
    std::map<int, std::vector<PairNode>> source_contracted;
    std::uint64_t target_hash = 0;

    std::size_t num_qubits() const;
    std::size_t num_intra_couplers() const;
};

// Blow a contracted embedding up to the full 4-clique chains: every pair
// contributes both of its qubits. Logical edges are read off the contracted
// graph (any two chains joined by a contracted edge).
PhysicalEmbedding expand(const Embedding& cemb, const ContractedGraph& cg,
                         const Graph& g);

// Pick one qubit per pair so that every chain stays connected and every
// logical edge keeps at least one coupler. The all-low choice works whenever
// the contracted edges carry multiplicity 4; otherwise a seeded backtracking
// search over per-pair choices runs, capped at 10^4 states.
PhysicalEmbedding derive_linear(const PhysicalEmbedding& pe, const Graph& g,
                                std::uint64_t seed);

struct NoValidSelection : GraphError {
    using GraphError::GraphError;
};

// Within-chain degree of every chain qubit, counting intra couplers only.
// Sorted ascending.
std::vector<int> degree_profile(const PhysicalEmbedding& pe, int var);

std::vector<Violation> validate_physical(const PhysicalEmbedding& pe,
                                         const Graph& g);

ChainStats physical_chain_stats(const PhysicalEmbedding& pe);

void save_physical(const PhysicalEmbedding& pe, const std::string& path);
PhysicalEmbedding load_physical(const std::string& path);

}  // namespace cliquebed
