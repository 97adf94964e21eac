#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cliquebed/bench.hpp"
#include "cliquebed/chains.hpp"
#include "cliquebed/contraction.hpp"
#include "cliquebed/embedder.hpp"
#include "cliquebed/graph.hpp"
#include "cliquebed/ising.hpp"
#include "cliquebed/sampler.hpp"

namespace {

using namespace cliquebed;

std::vector<QubitId> parse_id_list(const std::string& s) {
    std::vector<QubitId> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(static_cast<QubitId>(std::stoul(item)));
    return out;
}

std::vector<QubitEdge> parse_edge_list(const std::string& s) {
    std::vector<QubitEdge> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos)
            throw GraphError("edges are written a:b, got: " + item);
        auto a = static_cast<QubitId>(std::stoul(item.substr(0, colon)));
        auto b = static_cast<QubitId>(std::stoul(item.substr(colon + 1)));
        out.push_back({std::min(a, b), std::max(a, b)});
    }
    return out;
}

Graph load_any(const std::string& path) {
    if (path.size() > 9 && path.substr(path.size() - 9) == ".edgelist")
        return load_graph(path, GraphFormat::edgelist);
    return load_graph(path);
}

void print_graph_stats(const Graph& g) {
    std::printf("family: %s\n", family_name(g.family).c_str());
    std::printf("m: %d\n", g.m);
    std::printf("nodes: %zu\n", g.num_nodes());
    std::printf("edges: %zu\n", g.num_edges());
    std::printf("max_degree: %d\n", g.max_degree());
    std::printf("defect_nodes: %zu\n", g.defect_nodes.size());
    std::printf("defect_edges: %zu\n", g.defect_edges.size());
    std::printf("hash: %016llx\n", static_cast<unsigned long long>(g.hash()));
}

LogicalGraph parse_source(const std::string& s) {
    std::smatch m;
    if (std::regex_match(s, m, std::regex("[kK]([0-9]+)")))
        return complete_graph(std::stoi(m[1].str()));
    throw GraphError("source must be kN (a complete graph), got: " + s);
}

int cmd_bench_table2(const std::string& dir) {
    std::map<int, ChainStats> by_n;
    std::regex four_re("n([0-9]+)_four_clique\\.json");
    std::regex emb_re("n([0-9]+)_embedding\\.json");
    std::map<int, std::string> fours, embs;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        std::string name = entry.path().filename().string();
        std::smatch m;
        if (std::regex_match(name, m, four_re))
            fours[std::stoi(m[1].str())] = entry.path().string();
        else if (std::regex_match(name, m, emb_re))
            embs[std::stoi(m[1].str())] = entry.path().string();
    }
    for (const auto& [n, path] : fours)
        by_n[n] = physical_chain_stats(load_physical(path));
    for (const auto& [n, path] : embs)
        if (!by_n.count(n))
            by_n[n] = chain_length_stats(load_embedding(path), 2);
    if (by_n.empty()) {
        std::fprintf(stderr, "no embeddings found in %s\n", dir.c_str());
        return 1;
    }
    std::fputs(export_table2(by_n).c_str(), stdout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"4-clique network minor embedding toolkit"};
    app.require_subcommand(1);

    // graph
    auto* graph = app.add_subcommand("graph", "generate, load and inspect hardware graphs");
    graph->require_subcommand(1);

    auto* ggen = graph->add_subcommand("gen", "generate an ideal lattice");
    std::string g_family = "pegasus", g_out, g_format = "json";
    int g_m = 16;
    ggen->add_option("--family", g_family, "chimera, pegasus or zephyr");
    ggen->add_option("--m", g_m, "lattice size");
    ggen->add_option("-o,--out", g_out)->required();
    ggen->add_option("--format", g_format, "json or edgelist");

    auto* gload = graph->add_subcommand("load", "load and validate a graph");
    std::string gl_in;
    gload->add_option("--in", gl_in)->required();

    auto* gstats = graph->add_subcommand("stats", "print graph statistics");
    std::string gs_in;
    gstats->add_option("--in", gs_in)->required();

    auto* gdef = graph->add_subcommand("defects", "remove nodes and edges");
    std::string gd_in, gd_out, gd_nodes, gd_edges;
    gdef->add_option("--in", gd_in)->required();
    gdef->add_option("-o,--out", gd_out)->required();
    gdef->add_option("--nodes", gd_nodes, "comma-separated qubit ids");
    gdef->add_option("--edges", gd_edges, "comma-separated a:b pairs");

    // contract
    auto* contract = app.add_subcommand("contract", "run the 4-clique contraction");
    std::string c_in, c_out, c_pairing = "aligned";
    std::uint64_t c_seed = 0;
    int c_minmult = 1;
    bool c_largest = false;
    contract->add_option("--in", c_in)->required();
    contract->add_option("-o,--out", c_out)->required();
    contract->add_option("--seed", c_seed);
    contract->add_option("--pairing", c_pairing, "aligned or random");
    contract->add_option("--min-multiplicity", c_minmult);
    contract->add_flag("--largest-component", c_largest);

    // embed
    auto* embed = app.add_subcommand("embed", "embed a complete graph onto a target");
    std::string e_source, e_target, e_out;
    std::uint64_t e_seed = 0;
    int e_tries = 10, e_passes = 10;
    embed->add_option("--source", e_source, "kN")->required();
    embed->add_option("--target", e_target, "contracted or graph JSON")->required();
    embed->add_option("-o,--out", e_out)->required();
    embed->add_option("--seed", e_seed);
    embed->add_option("--tries", e_tries);
    embed->add_option("--passes", e_passes);

    // expand
    auto* expand_cmd = app.add_subcommand("expand", "expand to 4-clique chains");
    std::string x_emb, x_cg, x_g, x_out;
    expand_cmd->add_option("--embedding", x_emb)->required();
    expand_cmd->add_option("--contracted", x_cg)->required();
    expand_cmd->add_option("--graph", x_g)->required();
    expand_cmd->add_option("-o,--out", x_out)->required();

    // derive-linear
    auto* linear_cmd = app.add_subcommand("derive-linear", "derive the linear-path embedding");
    std::string l_in, l_g, l_out;
    std::uint64_t l_seed = 0;
    linear_cmd->add_option("--in", l_in)->required();
    linear_cmd->add_option("--graph", l_g)->required();
    linear_cmd->add_option("-o,--out", l_out)->required();
    linear_cmd->add_option("--seed", l_seed);

    // instance
    auto* instance = app.add_subcommand("instance", "random spin-glass instances");
    instance->require_subcommand(1);
    auto* igen = instance->add_subcommand("gen", "generate a random instance");
    int i_n = 8;
    std::uint64_t i_seed = 0;
    std::string i_out;
    igen->add_option("--n", i_n)->required();
    igen->add_option("--seed", i_seed);
    igen->add_option("-o,--out", i_out)->required();
    auto* iground = instance->add_subcommand("ground", "exact minimum by brute force");
    std::string ig_in;
    int ig_cap = 26;
    iground->add_option("--in", ig_in)->required();
    iground->add_option("--cap", ig_cap);

    // embed-params
    auto* eparams = app.add_subcommand("embed-params",
                                       "spread instance coefficients over an embedding");
    std::string p_inst, p_emb, p_out;
    double p_cs = 1.0, p_hrange = 2.0, p_jrange = 1.0;
    bool p_noscale = false;
    eparams->add_option("--instance", p_inst)->required();
    eparams->add_option("--embedding", p_emb, "physical embedding JSON")->required();
    eparams->add_option("--chain-strength", p_cs)->required();
    eparams->add_option("--h-range", p_hrange);
    eparams->add_option("--j-range", p_jrange);
    eparams->add_flag("--no-autoscale", p_noscale);
    eparams->add_option("-o,--out", p_out)->required();

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "anneal, unembed and write per-read CSV");
    std::string s_embedded, s_emb, s_inst, s_mode = "discard_zero", s_out;
    int s_reads = 1000, s_sweeps = 1000;
    double s_bmin = 0.1, s_bmax = 3.0;
    std::uint64_t s_seed = 0, s_useed = 0;
    bool s_quench = false;
    sample_cmd->add_option("--embedded", s_embedded, "embedded Ising JSON")->required();
    sample_cmd->add_option("--embedding", s_emb, "physical embedding JSON")->required();
    sample_cmd->add_option("--instance", s_inst)->required();
    sample_cmd->add_option("--reads", s_reads);
    sample_cmd->add_option("--sweeps", s_sweeps);
    sample_cmd->add_option("--beta-min", s_bmin);
    sample_cmd->add_option("--beta-max", s_bmax);
    sample_cmd->add_option("--seed", s_seed);
    sample_cmd->add_option("--unembed-seed", s_useed);
    sample_cmd->add_option("--mode", s_mode, "discard_zero or majority");
    sample_cmd->add_flag("--quench", s_quench, "append zero-temperature sweeps");
    sample_cmd->add_option("-o,--out", s_out)->required();

    // bench
    auto* bench = app.add_subcommand("bench", "experiment harness");
    bench->require_subcommand(1);
    auto* brun = bench->add_subcommand("run", "run a configured experiment");
    std::string br_config;
    bool br_gnuplot = false;
    brun->add_option("--config", br_config)->required();
    brun->add_flag("--gnuplot", br_gnuplot, "also write boxplot whisker files");
    auto* bcomp = bench->add_subcommand("compare", "compare two reports");
    std::string bc_a, bc_b;
    bcomp->add_option("a", bc_a)->required();
    bcomp->add_option("b", bc_b)->required();
    auto* btab = bench->add_subcommand("table2", "chain-length table from saved embeddings");
    std::string bt_dir;
    btab->add_option("--embeddings", bt_dir)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (ggen->parsed()) {
            auto g = generate(family_from_name(g_family), g_m);
            save_graph(g, g_out,
                       g_format == "edgelist" ? GraphFormat::edgelist
                                              : GraphFormat::json);
            print_graph_stats(g);
        } else if (gload->parsed()) {
            auto g = load_any(gl_in);
            std::printf("ok: %zu nodes, %zu edges\n", g.num_nodes(), g.num_edges());
        } else if (gstats->parsed()) {
            print_graph_stats(load_any(gs_in));
        } else if (gdef->parsed()) {
            auto g = load_any(gd_in);
            auto out = apply_defects(g, parse_id_list(gd_nodes), parse_edge_list(gd_edges));
            save_graph(out, gd_out);
            print_graph_stats(out);
        } else if (contract->parsed()) {
            auto g = load_any(c_in);
            ContractOptions opts;
            opts.pairing = pairing_from_name(c_pairing);
            opts.min_multiplicity = c_minmult;
            auto cg = contract_4_cliques(g, c_seed, opts);
            auto comps = components(cg);
            if (c_largest) cg = largest_component(cg);
            save_contracted(cg, c_out);
            auto [qf, cf] = coverage(cg, g);
            std::printf("pairs: %zu\n", cg.num_pairs());
            std::printf("edges: %zu\n", cg.num_edges());
            std::printf("components: %zu\n", comps.size());
            std::printf("qubit_fraction: %.6f\n", qf);
            std::printf("coupler_fraction: %.6f\n", cf);
        } else if (embed->parsed()) {
            auto source = parse_source(e_source);
            std::ifstream probe(e_target);
            if (!probe) throw GraphError("cannot open: " + e_target);
            nlohmann::json j;
            probe >> j;
            TargetGraph tgt = j.contains("pairs")
                                  ? target_from(load_contracted(e_target))
                                  : target_from(load_any(e_target));
            EmbedderParams params;
            params.tries = e_tries;
            params.max_passes = e_passes;
            params.seed = e_seed;
            auto emb = find_embedding(source, tgt, params);
            save_embedding(emb, e_out);
            auto st = chain_length_stats(emb, 1);
            std::printf("chains: %zu\n", emb.chains.size());
            std::printf("chain_nodes (min, mean ± sigma, max): (%g, %.3f ± %.3f, %g)\n",
                        st.min, st.mean, st.stddev, st.max);
        } else if (expand_cmd->parsed()) {
            auto emb = load_embedding(x_emb);
            auto cg = load_contracted(x_cg);
            auto g = load_any(x_g);
            auto pe = expand(emb, cg, g);
            save_physical(pe, x_out);
            auto st = physical_chain_stats(pe);
            std::printf("qubits: %zu, intra couplers: %zu\n", pe.num_qubits(),
                        pe.num_intra_couplers());
            std::printf("chain_length (min, mean ± sigma, max): (%g, %.3f ± %.3f, %g)\n",
                        st.min, st.mean, st.stddev, st.max);
        } else if (linear_cmd->parsed()) {
            auto pe = load_physical(l_in);
            auto g = load_any(l_g);
            auto lin = derive_linear(pe, g, l_seed);
            save_physical(lin, l_out);
            std::printf("qubits: %zu, intra couplers: %zu\n", lin.num_qubits(),
                        lin.num_intra_couplers());
        } else if (igen->parsed()) {
            auto m = random_sk(i_n, i_seed);
            save_instance(m, i_out);
            std::printf("n: %d, linear terms: %zu, quadratic terms: %zu\n", m.n,
                        m.h.size(), m.J.size());
        } else if (iground->parsed()) {
            auto m = load_instance(ig_in);
            auto [e, z] = brute_force_min(m, ig_cap);
            std::printf("ground energy: %.17g\n", e);
            std::printf("spins:");
            for (int s : z) std::printf(" %+d", s);
            std::printf("\n");
        } else if (eparams->parsed()) {
            auto m = load_instance(p_inst);
            auto pe = load_physical(p_emb);
            auto e = embed_parameters(m, pe, p_cs);
            if (!p_noscale) e = autoscale(e, p_hrange, p_jrange);
            save_embedded(e, p_out);
            std::printf("qubits: %zu, problem couplers: %zu, chain couplers: %zu\n",
                        e.qubits().size(), e.J.size(), e.chain_couplers.size());
            std::printf("scale_factor: %.6f\n", e.scale_factor);
        } else if (sample_cmd->parsed()) {
            auto e = load_embedded(s_embedded);
            auto pe = load_physical(s_emb);
            auto m = load_instance(s_inst);
            int qs = s_quench ? std::max(10, s_sweeps / 10) : 0;
            auto raw = sample(e, s_reads, s_sweeps, s_bmin, s_bmax, s_seed, qs);
            auto ss = unembed(raw, pe, m, resolution_mode_from(s_mode), s_useed);
            save_samples_csv(ss, s_out);
            double best = 0;
            bool first = true;
            for (const auto& r : ss.reads)
                if (first || r.logical_energy < best) {
                    best = r.logical_energy;
                    first = false;
                }
            std::printf("reads: %zu\n", ss.reads.size());
            std::printf("break_rate: %.4f\n", break_rate(ss));
            std::printf("best_logical_energy: %.17g\n", best);
        } else if (brun->parsed()) {
            auto cfg = load_config(br_config);
            if (br_gnuplot) cfg.gnuplot = true;
            auto rep = run_experiment(cfg);
            for (const auto& r : rep.records)
                std::printf("N=%d %s cs=%g sweeps=%d break=%.4f median=%g best=%g%s\n",
                            r.n, chain_kind_name(r.kind).c_str(), r.chain_strength,
                            r.sweeps, r.break_rate, r.e_median, r.best_logical,
                            r.has_ground
                                ? (" ground=" + std::to_string(r.ground)).c_str()
                                : "");
            for (const auto& f : rep.failures)
                std::fprintf(stderr, "failed: %s\n", f.c_str());
            std::printf("report: %s/report.json\n", cfg.out_dir.c_str());
            return rep.failures.empty() ? 0 : 2;
        } else if (bcomp->parsed()) {
            auto c = compare(load_report(bc_a), load_report(bc_b));
            std::fputs(comparison_text(c).c_str(), stdout);
        } else if (btab->parsed()) {
            return cmd_bench_table2(bt_dir);
        }
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    }
    return 0;
}
