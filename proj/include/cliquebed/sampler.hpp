#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cliquebed/chains.hpp"
#include "cliquebed/ising.hpp"

namespace cliquebed {

// Exact minimum of the Ising cost by exhaustive enumeration. Ties go to the
// lexicographically smallest spin vector (-1 sorts before +1).
std::pair<double, std::vector<int>> brute_force_min(const IsingModel& m,
                                                    int cap = 26);

// Final states of independent simulated-annealing reads on the physical
// model. Spins are aligned with `qubits`.
struct RawSamples {
    std::vector<QubitId> qubits;
    std::vector<std::vector<std::int8_t>> states;
    std::vector<double> energies;
    int sweeps = 0;
    int quench_sweeps = 0;
    double beta_min = 0.0;
    double beta_max = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t embedding_ref = 0;
};

// Metropolis single-spin annealing: each read starts from a random state
// and runs `sweeps` index-order sweeps over a geometric inverse-temperature
// ladder from beta_min to beta_max. Each read draws from its own stream
// derived from (seed, read index), so reads can run in any order.
// quench_sweeps appends zero-temperature sweeps (only strictly downhill
// moves) after the ladder.
RawSamples sample(const EmbeddedIsing& e, int reads, int sweeps,
                  double beta_min = 0.1, double beta_max = 3.0,
                  std::uint64_t seed = 0, int quench_sweeps = 0);

enum class ResolutionMode { discard_zero, majority };

std::string resolution_mode_name(ResolutionMode m);
ResolutionMode resolution_mode_from(const std::string& name);

struct ReadRecord {
    std::vector<std::int8_t> physical;
    double physical_energy = 0.0;
    bool broken = false;
    std::vector<int> logical;  // empty when the read was discarded
    double logical_energy = 0.0;
};

struct SampleSet {
    std::vector<QubitId> qubits;
    std::vector<ReadRecord> reads;
    int sweeps = 0;
    int quench_sweeps = 0;
    double beta_min = 0.0;
    double beta_max = 0.0;
    std::uint64_t sample_seed = 0;
    std::uint64_t unembed_seed = 0;
    ResolutionMode mode = ResolutionMode::discard_zero;
};

// Chain-break resolution. A read is broken when any chain's qubits
// disagree. discard_zero records a broken read with logical energy 0 and no
// logical spins; majority takes the per-chain majority spin, flipping a
// seeded coin on ties (chains have even sizes), and always evaluates the
// logical energy.
SampleSet unembed(const RawSamples& raw, const PhysicalEmbedding& pe,
                  const IsingModel& m, ResolutionMode mode,
                  std::uint64_t seed);

double break_rate(const SampleSet& s);

// +1 spins become 1-bits, packed most-significant-bit first, then base64.
std::string pack_spins(const std::vector<int>& z);
std::vector<int> unpack_spins(const std::string& b64, int n);

void save_samples_csv(const SampleSet& s, const std::string& path);
SampleSet load_samples_csv(const std::string& path, int n_logical);

}  // namespace cliquebed
