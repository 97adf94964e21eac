#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cliquebed/chains.hpp"
#include "cliquebed/contraction.hpp"
#include "cliquebed/embedder.hpp"
#include "cliquebed/graph.hpp"
#include "cliquebed/ising.hpp"
#include "cliquebed/sampler.hpp"

namespace cliquebed {

// Everything a run needs, seeds included, so a config file alone reproduces
// a run bit for bit.
struct ExperimentConfig {
    std::string family = "pegasus";
    int m = 16;
    std::string hardware_file;  // overrides family/m when set
    std::uint64_t contraction_seed = 0;
    Pairing pairing = Pairing::aligned;
    int min_multiplicity = 4;
    bool largest_component = true;
    std::vector<int> sizes;
    std::vector<double> chain_strengths;
    std::vector<int> sweep_settings;
    int reads = 1000;
    std::vector<ChainKind> kinds = {ChainKind::four_clique, ChainKind::linear};
    int embedder_tries = 10;
    int embedder_passes = 10;
    std::uint64_t embedder_seed = 0;
    std::uint64_t instance_seed = 0;
    std::uint64_t sampler_seed = 0;
    std::uint64_t unembed_seed = 0;
    ResolutionMode mode = ResolutionMode::discard_zero;
    double beta_min = 0.1;
    double beta_max = 3.0;
    bool quench = false;
    double h_range = 2.0;
    double j_range = 1.0;
    int brute_force_cap = 26;
    std::string out_dir = "out";
    bool gnuplot = false;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

struct SettingRecord {
    int n = 0;
    ChainKind kind = ChainKind::four_clique;
    double chain_strength = 0.0;
    int sweeps = 0;
    double break_rate = 0.0;
    double e_min = 0.0;
    double e_q1 = 0.0;
    double e_median = 0.0;
    double e_q3 = 0.0;
    double e_max = 0.0;
    double e_mean = 0.0;
    double best_logical = 0.0;
    bool has_ground = false;
    double ground = 0.0;
    ChainStats chain_stats;
    std::uint64_t sample_seed = 0;
    std::uint64_t unembed_seed = 0;
    std::string csv;
};

struct Report {
    ExperimentConfig config;
    std::vector<SettingRecord> records;
    std::vector<std::string> failures;  // embedding failures, skipped settings
};

// Linear-interpolated quantile of a sorted sample (the common "type 7"
// definition; p=0.5 is the median).
double quantile_sorted(const std::vector<double>& sorted, double p);

// Full pipeline per size N: instance, embedding onto the contracted graph,
// 4-clique expansion, linear derivation, then one sampled record per
// (kind, chain strength, sweeps). All intermediate artifacts land in
// cfg.out_dir. Embedding failures are recorded in the report and skipped.
Report run_experiment(const ExperimentConfig& cfg);

void save_report(const Report& rep, const std::string& path);
Report load_report(const std::string& path);

struct CompareRow {
    int n = 0;
    double chain_strength = 0.0;
    int sweeps = 0;
    std::string kind_a;
    std::string kind_b;
    double d_break = 0.0;
    double d_median = 0.0;
    double d_best = 0.0;
};

struct Comparison {
    std::vector<CompareRow> rows;
    int break_neg = 0, break_zero = 0, break_pos = 0;
    int median_neg = 0, median_zero = 0, median_pos = 0;
};

// Per shared setting, deltas a minus b. Settings match on
// (n, kind, chain strength, sweeps); when the reports share no kind (for
// instance a four_clique run against its linear twin) the kind is dropped
// from the key.
Comparison compare(const Report& a, const Report& b);
std::string comparison_text(const Comparison& c);

// Table of physical chain lengths per N, one "(min, mean +- sigma, max)"
// row each, three decimals on mean and sigma.
std::string export_table2(const std::map<int, ChainStats>& by_n);

}  // namespace cliquebed
