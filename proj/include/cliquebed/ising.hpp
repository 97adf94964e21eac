#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cliquebed/chains.hpp"
#include "cliquebed/graph.hpp"

namespace cliquebed {

// Ising cost C(z) = sum h_v z_v + sum J_uv z_u z_v over spins z in {-1,+1}.
struct IsingModel {
    int n = 0;
    std::map<int, double> h;
    std::map<std::pair<int, int>, double> J;  // keys (u,v) with u < v
    std::uint64_t seed = 0;
};

// Random spin glass: every h and J coefficient an independent fair draw
// from {-1,+1}. h is drawn in variable order, then J in lexicographic
// pair order, so a seed pins the instance exactly.
IsingModel random_sk(int n, std::uint64_t seed);

double energy(const IsingModel& m, const std::vector<int>& z);

// Physical coefficients after spreading a logical model over an embedding.
// Chain couplers are stored separately from problem couplers; their
// effective value is -chain_strength * scale_factor.
struct EmbeddedIsing {
    std::map<QubitId, double> h;
    std::map<QubitEdge, double> J;
    std::vector<QubitEdge> chain_couplers;
    double chain_strength = 0.0;
    double scale_factor = 1.0;
    std::uint64_t embedding_ref = 0;

    std::vector<QubitId> qubits() const;  // sorted union of everything used
};

std::uint64_t physical_hash(const PhysicalEmbedding& pe);

// h_i is split equally over chain(i), J_ij equally over the logical edge's
// couplers, and every intra-chain coupler is set ferromagnetic at
// -chain_strength.
EmbeddedIsing embed_parameters(const IsingModel& m, const PhysicalEmbedding& pe,
                               double chain_strength);

// Device-style rescale into the programmable range: multiply every physical
// coefficient (chain couplers included) by
// s = min(h_range/max|h|, j_range/max|J|), a missing term meaning no
// constraint. s > 1 scales up, matching a device that always uses the full
// energy scale.
EmbeddedIsing autoscale(EmbeddedIsing e, double h_range = 2.0,
                        double j_range = 1.0);

double physical_energy(const EmbeddedIsing& e,
                       const std::map<QubitId, int>& x);

void save_instance(const IsingModel& m, const std::string& path);
IsingModel load_instance(const std::string& path);

void save_embedded(const EmbeddedIsing& e, const std::string& path);
EmbeddedIsing load_embedded(const std::string& path);

}  // namespace cliquebed
