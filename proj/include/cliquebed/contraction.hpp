#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cliquebed/graph.hpp"

namespace cliquebed {

// A contracted node: two adjacent physical qubits.
struct PairNode {
    QubitId lo = 0, hi = 0;  // lo < hi, (lo,hi) is a hardware coupler
    friend auto operator<=>(const PairNode&, const PairNode&) = default;
};

struct ContractedEdge {
    std::uint32_t i = 0, j = 0;  // indices into pairs, i < j
    int multiplicity = 0;        // hardware couplers between the two pairs, 1..4
    friend auto operator<=>(const ContractedEdge&, const ContractedEdge&) = default;
};

struct ContractedGraph {
    std::vector<PairNode> pairs;        // sorted by (lo, hi)
    std::vector<ContractedEdge> edges;  // sorted by (i, j)
    std::uint64_t source_hash = 0;

    std::size_t num_pairs() const { return pairs.size(); }
    std::size_t num_edges() const { return edges.size(); }
    // Neighbor lists (neighbor index, multiplicity), indexed by pair index.
    std::vector<std::vector<std::pair<std::uint32_t, int>>> adjacency() const;
};

// How the two contracted pairs are chosen from a sorted clique {a<b<c<d}.
//   aligned: (a,b) and (c,d). On Pegasus this pairs same-orientation qubits
//            and reproduces the published 4-clique network structure.
//   random:  partner of a drawn uniformly from {b,c,d} with a generator
//            seeded by the contraction seed, one draw per processed clique.
enum class Pairing { aligned, random };

Pairing pairing_from_name(const std::string& s);
std::string pairing_name(Pairing p);

struct ContractOptions {
    Pairing pairing = Pairing::aligned;
    int min_multiplicity = 1;  // drop contracted edges below this count
};

// All 4-cliques as sorted qubit quadruples, lexicographic order.
std::vector<std::array<QubitId, 4>> enumerate_4_cliques(const Graph& g);

// Algorithm: walk the cliques in canonical order, skip any clique touching
// an already contracted qubit, contract the two chosen pairs, and finally
// keep only pair nodes and the edges joining them (with multiplicities).
ContractedGraph contract_4_cliques(const Graph& g, std::uint64_t seed,
                                   const ContractOptions& opts = {});

// Connected components, largest first; ties by smallest member PairNode.
// Pair indices are renumbered per component (pairs stay sorted).
std::vector<ContractedGraph> components(const ContractedGraph& cg);

ContractedGraph largest_component(const ContractedGraph& cg);

// (qubit_fraction, coupler_fraction) of cg relative to its source graph:
// 2*|pairs|/|qubits| and sum of edge multiplicities / |couplers|.
std::pair<double, double> coverage(const ContractedGraph& cg, const Graph& g);

void save_contracted(const ContractedGraph& cg, const std::string& path);
ContractedGraph load_contracted(const std::string& path);

}  // namespace cliquebed
