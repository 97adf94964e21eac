#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cliquebed {

using QubitId = std::uint32_t;
using QubitEdge = std::pair<QubitId, QubitId>;  // normalized a < b

enum class Family { chimera, pegasus, zephyr, custom };

std::string family_name(Family f);
Family family_from_name(const std::string& s);

// Undirected hardware graph. Nodes and edges are kept sorted so that all
// downstream iteration, hashing and serialization is order-stable.
struct Graph {
    Family family = Family::custom;
    int m = 0;
    std::vector<QubitId> nodes;                // ascending
    std::vector<QubitEdge> edges;              // normalized, ascending
    std::vector<QubitId> defect_nodes;         // removed qubits
    std::vector<QubitEdge> defect_edges;       // removed couplers

    std::size_t num_nodes() const { return nodes.size(); }
    std::size_t num_edges() const { return edges.size(); }
    bool has_node(QubitId q) const;
    bool has_edge(QubitId a, QubitId b) const;
    // Position of q in nodes; throws if absent.
    std::size_t index_of(QubitId q) const;
    // Neighbor lists indexed by node position (ascending within each list).
    std::vector<std::vector<QubitId>> adjacency() const;
    int max_degree() const;
    // FNV-1a 64 over the canonical serialization (family, m, nodes, edges).
    std::uint64_t hash() const;
};

// Ideal lattice generator. Node ids follow each family's canonical linear
// index: chimera (row, col, u, k) with t=4; pegasus (u, w, k, z) with 12
// qubits per tile, standard offsets; zephyr (u, w, k, j, z) with t=4.
Graph generate(Family f, int m);

enum class GraphFormat { json, edgelist };

Graph load_graph(const std::string& path, GraphFormat fmt);
Graph load_graph(const std::string& path);  // format from extension
void save_graph(const Graph& g, const std::string& path);
void save_graph(const Graph& g, const std::string& path, GraphFormat fmt);

// Removes the listed qubits (with incident couplers) and couplers; records
// them in the defect metadata. Throws if a reference does not exist.
Graph apply_defects(const Graph& g,
                    const std::vector<QubitId>& dead_nodes,
                    const std::vector<QubitEdge>& dead_edges);

// Construction helper for tests and tools: normalizes, sorts, validates.
Graph make_graph(std::vector<QubitId> nodes, std::vector<QubitEdge> edges,
                 Family family = Family::custom, int m = 0);

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cliquebed
