#include "cliquebed/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "cliquebed/rng.hpp"

namespace cliquebed {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

bool parse_bool(const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw GraphError("expected true or false, got: " + v);
}

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw GraphError("config line " + std::to_string(lineno) +
                             ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "family") cfg.family = val;
        else if (key == "m") cfg.m = std::stoi(val);
        else if (key == "hardware_file") cfg.hardware_file = val;
        else if (key == "contraction_seed") cfg.contraction_seed = std::stoull(val);
        else if (key == "pairing") cfg.pairing = pairing_from_name(val);
        else if (key == "min_multiplicity") cfg.min_multiplicity = std::stoi(val);
        else if (key == "largest_component") cfg.largest_component = parse_bool(val);
        else if (key == "sizes") {
            cfg.sizes.clear();
            for (const auto& s : split_list(val)) cfg.sizes.push_back(std::stoi(s));
        } else if (key == "chain_strengths") {
            cfg.chain_strengths.clear();
            for (const auto& s : split_list(val))
                cfg.chain_strengths.push_back(std::stod(s));
        } else if (key == "sweeps") {
            cfg.sweep_settings.clear();
            for (const auto& s : split_list(val))
                cfg.sweep_settings.push_back(std::stoi(s));
        } else if (key == "reads") cfg.reads = std::stoi(val);
        else if (key == "kinds") {
            cfg.kinds.clear();
            for (const auto& s : split_list(val)) cfg.kinds.push_back(chain_kind_from(s));
        } else if (key == "embedder_tries") cfg.embedder_tries = std::stoi(val);
        else if (key == "embedder_passes") cfg.embedder_passes = std::stoi(val);
        else if (key == "embedder_seed") cfg.embedder_seed = std::stoull(val);
        else if (key == "instance_seed") cfg.instance_seed = std::stoull(val);
        else if (key == "sampler_seed") cfg.sampler_seed = std::stoull(val);
        else if (key == "unembed_seed") cfg.unembed_seed = std::stoull(val);
        else if (key == "mode") cfg.mode = resolution_mode_from(val);
        else if (key == "beta_min") cfg.beta_min = std::stod(val);
        else if (key == "beta_max") cfg.beta_max = std::stod(val);
        else if (key == "quench") cfg.quench = parse_bool(val);
        else if (key == "h_range") cfg.h_range = std::stod(val);
        else if (key == "j_range") cfg.j_range = std::stod(val);
        else if (key == "brute_force_cap") cfg.brute_force_cap = std::stoi(val);
        else if (key == "out_dir") cfg.out_dir = val;
        else if (key == "gnuplot") cfg.gnuplot = parse_bool(val);
        else throw GraphError("unknown config key: " + key);
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw GraphError("quantile of empty sample");
    if (p <= 0.0) return sorted.front();
    if (p >= 1.0) return sorted.back();
    double pos = p * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(pos);
    double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

namespace {

nlohmann::ordered_json config_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["family"] = c.family;
    j["m"] = c.m;
    j["hardware_file"] = c.hardware_file;
    j["contraction_seed"] = c.contraction_seed;
    j["pairing"] = pairing_name(c.pairing);
    j["min_multiplicity"] = c.min_multiplicity;
    j["largest_component"] = c.largest_component;
    j["sizes"] = c.sizes;
    j["chain_strengths"] = c.chain_strengths;
    j["sweeps"] = c.sweep_settings;
    j["reads"] = c.reads;
    std::vector<std::string> kinds;
    for (auto k : c.kinds) kinds.push_back(chain_kind_name(k));
    j["kinds"] = kinds;
    j["embedder_tries"] = c.embedder_tries;
    j["embedder_passes"] = c.embedder_passes;
    j["embedder_seed"] = c.embedder_seed;
    j["instance_seed"] = c.instance_seed;
    j["sampler_seed"] = c.sampler_seed;
    j["unembed_seed"] = c.unembed_seed;
    j["mode"] = resolution_mode_name(c.mode);
    j["beta_min"] = c.beta_min;
    j["beta_max"] = c.beta_max;
    j["quench"] = c.quench;
    j["h_range"] = c.h_range;
    j["j_range"] = c.j_range;
    j["brute_force_cap"] = c.brute_force_cap;
    j["out_dir"] = c.out_dir;
    j["gnuplot"] = c.gnuplot;
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.family = j.at("family").get<std::string>();
    c.m = j.at("m").get<int>();
    c.hardware_file = j.at("hardware_file").get<std::string>();
    c.contraction_seed = j.at("contraction_seed").get<std::uint64_t>();
    c.pairing = pairing_from_name(j.at("pairing").get<std::string>());
    c.min_multiplicity = j.at("min_multiplicity").get<int>();
    c.largest_component = j.at("largest_component").get<bool>();
    c.sizes = j.at("sizes").get<std::vector<int>>();
    c.chain_strengths = j.at("chain_strengths").get<std::vector<double>>();
    c.sweep_settings = j.at("sweeps").get<std::vector<int>>();
    c.reads = j.at("reads").get<int>();
    c.kinds.clear();
    for (const auto& k : j.at("kinds"))
        c.kinds.push_back(chain_kind_from(k.get<std::string>()));
    c.embedder_tries = j.at("embedder_tries").get<int>();
    c.embedder_passes = j.at("embedder_passes").get<int>();
    c.embedder_seed = j.at("embedder_seed").get<std::uint64_t>();
    c.instance_seed = j.at("instance_seed").get<std::uint64_t>();
    c.sampler_seed = j.at("sampler_seed").get<std::uint64_t>();
    c.unembed_seed = j.at("unembed_seed").get<std::uint64_t>();
    c.mode = resolution_mode_from(j.at("mode").get<std::string>());
    c.beta_min = j.at("beta_min").get<double>();
    c.beta_max = j.at("beta_max").get<double>();
    c.quench = j.at("quench").get<bool>();
    c.h_range = j.at("h_range").get<double>();
    c.j_range = j.at("j_range").get<double>();
    c.brute_force_cap = j.at("brute_force_cap").get<int>();
    c.out_dir = j.at("out_dir").get<std::string>();
    c.gnuplot = j.at("gnuplot").get<bool>();
    return c;
}

}  // namespace

Report run_experiment(const ExperimentConfig& cfg) {
    if (cfg.sizes.empty() || cfg.chain_strengths.empty() ||
        cfg.sweep_settings.empty() || cfg.kinds.empty())
        throw GraphError("sizes, chain_strengths, sweeps and kinds must be non-empty");
    if (cfg.reads < 1) throw GraphError("reads must be >= 1");
    std::filesystem::create_directories(cfg.out_dir);
    auto path = [&](const std::string& name) { return cfg.out_dir + "/" + name; };

    Graph g = cfg.hardware_file.empty()
                  ? generate(family_from_name(cfg.family), cfg.m)
                  : load_graph(cfg.hardware_file);
    ContractOptions copts;
    copts.pairing = cfg.pairing;
    copts.min_multiplicity = cfg.min_multiplicity;
    ContractedGraph cg = contract_4_cliques(g, cfg.contraction_seed, copts);
    if (cfg.largest_component) cg = largest_component(cg);
    save_contracted(cg, path("contracted.json"));
    TargetGraph tgt = target_from(cg);

    Report rep;
    rep.config = cfg;
    const std::size_t K = cfg.kinds.size();
    const std::size_t C = cfg.chain_strengths.size();
    const std::size_t S = cfg.sweep_settings.size();

    for (std::size_t ni = 0; ni < cfg.sizes.size(); ++ni) {
        int N = cfg.sizes[ni];
        std::string ntag = "n" + std::to_string(N);
        auto inst = random_sk(N, derive_seed(cfg.instance_seed,
                                             static_cast<std::uint64_t>(N)));
        save_instance(inst, path(ntag + "_instance.json"));

        Embedding emb;
        try {
            EmbedderParams ep;
            ep.tries = cfg.embedder_tries;
            ep.max_passes = cfg.embedder_passes;
            ep.seed = derive_seed(cfg.embedder_seed, static_cast<std::uint64_t>(N));
            emb = find_embedding(complete_graph(N), tgt, ep);
        } catch (const EmbeddingNotFound& ex) {
            rep.failures.push_back(ntag + ": " + ex.what());
            continue;
        }
        save_embedding(emb, path(ntag + "_embedding.json"));
        auto four = expand(emb, cg, g);
        save_physical(four, path(ntag + "_four_clique.json"));

        PhysicalEmbedding linear;
        bool have_linear = false;
        try {
            linear = derive_linear(
                four, g,
                derive_seed(cfg.embedder_seed, (1ULL << 32) | static_cast<std::uint64_t>(N)));
            save_physical(linear, path(ntag + "_linear.json"));
            have_linear = true;
        } catch (const NoValidSelection& ex) {
            rep.failures.push_back(ntag + " linear: " + ex.what());
        }

        bool has_ground = N <= cfg.brute_force_cap;
        double ground = 0.0;
        if (has_ground) ground = brute_force_min(inst, cfg.brute_force_cap).first;

        for (std::size_t ki = 0; ki < K; ++ki) {
            ChainKind kind = cfg.kinds[ki];
            if (kind == ChainKind::linear && !have_linear) continue;
            const PhysicalEmbedding& pe =
                kind == ChainKind::four_clique ? four : linear;
            for (std::size_t ci = 0; ci < C; ++ci) {
                double cs = cfg.chain_strengths[ci];
                for (std::size_t si = 0; si < S; ++si) {
                    int sw = cfg.sweep_settings[si];
                    std::uint64_t idx = ((ni * K + ki) * C + ci) * S + si;
                    auto e = autoscale(embed_parameters(inst, pe, cs),
                                       cfg.h_range, cfg.j_range);
                    int qs = cfg.quench ? std::max(10, sw / 10) : 0;
                    std::uint64_t sseed = derive_seed(cfg.sampler_seed, idx);
                    std::uint64_t useed = derive_seed(cfg.unembed_seed, idx);
                    auto raw = sample(e, cfg.reads, sw, cfg.beta_min,
                                      cfg.beta_max, sseed, qs);
                    auto ss = unembed(raw, pe, inst, cfg.mode, useed);
                    std::string csv = ntag + "_" + chain_kind_name(kind) +
                                      "_cs" + fmt_g(cs) + "_sw" +
                                      std::to_string(sw) + ".csv";
                    save_samples_csv(ss, path(csv));

                    SettingRecord rec;
                    rec.n = N;
                    rec.kind = kind;
                    rec.chain_strength = cs;
                    rec.sweeps = sw;
                    rec.break_rate = break_rate(ss);
                    std::vector<double> energies;
                    for (const auto& r : ss.reads)
                        energies.push_back(r.logical_energy);
                    std::sort(energies.begin(), energies.end());
                    rec.e_min = energies.front();
                    rec.e_max = energies.back();
                    rec.e_q1 = quantile_sorted(energies, 0.25);
                    rec.e_median = quantile_sorted(energies, 0.5);
                    rec.e_q3 = quantile_sorted(energies, 0.75);
                    double sum = 0;
                    for (double x : energies) sum += x;
                    rec.e_mean = sum / static_cast<double>(energies.size());
                    rec.best_logical = energies.front();
                    rec.has_ground = has_ground;
                    rec.ground = ground;
                    rec.chain_stats = physical_chain_stats(pe);
                    rec.sample_seed = sseed;
                    rec.unembed_seed = useed;
                    rec.csv = csv;
                    rep.records.push_back(std::move(rec));
                }
            }
        }
    }

    if (cfg.gnuplot) {
        std::map<std::tuple<int, std::string, double>,
                 std::vector<const SettingRecord*>> groups;
        for (const auto& r : rep.records)
            groups[{r.n, chain_kind_name(r.kind), r.chain_strength}].push_back(&r);
        for (auto& [key, rows] : groups) {
            std::sort(rows.begin(), rows.end(),
                      [](const SettingRecord* a, const SettingRecord* b) {
                          return a->sweeps < b->sweeps;
                      });
            auto [n, kind, cs] = key;
            std::ofstream out(path("box_n" + std::to_string(n) + "_" + kind +
                                   "_cs" + fmt_g(cs) + ".dat"));
            if (!out) throw GraphError("cannot write gnuplot file");
            out << "# sweeps min q1 median q3 max\n";
            char buf[160];
            for (const auto* r : rows) {
                std::snprintf(buf, sizeof buf, "%d %.17g %.17g %.17g %.17g %.17g\n",
                              r->sweeps, r->e_min, r->e_q1, r->e_median, r->e_q3,
                              r->e_max);
                out << buf;
            }
        }
    }

    save_report(rep, path("report.json"));
    return rep;
}

void save_report(const Report& rep, const std::string& path) {
    nlohmann::ordered_json j;
    j["config"] = config_json(rep.config);
    auto records = nlohmann::ordered_json::array();
    for (const auto& r : rep.records) {
        nlohmann::ordered_json rj;
        rj["n"] = r.n;
        rj["kind"] = chain_kind_name(r.kind);
        rj["chain_strength"] = r.chain_strength;
        rj["sweeps"] = r.sweeps;
        rj["break_rate"] = r.break_rate;
        rj["energy"] = {{"min", r.e_min},   {"q1", r.e_q1},
                        {"median", r.e_median}, {"q3", r.e_q3},
                        {"max", r.e_max},   {"mean", r.e_mean}};
        rj["best_logical"] = r.best_logical;
        if (r.has_ground)
            rj["ground"] = r.ground;
        else
            rj["ground"] = nullptr;
        rj["chain_stats"] = {{"min", r.chain_stats.min},
                             {"mean", r.chain_stats.mean},
                             {"stddev", r.chain_stats.stddev},
                             {"max", r.chain_stats.max}};
        rj["sample_seed"] = r.sample_seed;
        rj["unembed_seed"] = r.unembed_seed;
        rj["csv"] = r.csv;
        records.push_back(std::move(rj));
    }
    j["records"] = std::move(records);
    j["failures"] = rep.failures;
    std::ofstream out(path);
    if (!out) throw GraphError("cannot open for write: " + path);
    out << j.dump(1) << "\n";
}

Report load_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open: " + path);
    nlohmann::json j;
    in >> j;
    Report rep;
    rep.config = config_from_json(j.at("config"));
    for (const auto& rj : j.at("records")) {
        SettingRecord r;
        r.n = rj.at("n").get<int>();
        r.kind = chain_kind_from(rj.at("kind").get<std::string>());
        r.chain_strength = rj.at("chain_strength").get<double>();
        r.sweeps = rj.at("sweeps").get<int>();
        r.break_rate = rj.at("break_rate").get<double>();
        const auto& en = rj.at("energy");
        r.e_min = en.at("min").get<double>();
        r.e_q1 = en.at("q1").get<double>();
        r.e_median = en.at("median").get<double>();
        r.e_q3 = en.at("q3").get<double>();
        r.e_max = en.at("max").get<double>();
        r.e_mean = en.at("mean").get<double>();
        r.best_logical = rj.at("best_logical").get<double>();
        r.has_ground = !rj.at("ground").is_null();
        if (r.has_ground) r.ground = rj.at("ground").get<double>();
        const auto& cs = rj.at("chain_stats");
        r.chain_stats.min = cs.at("min").get<double>();
        r.chain_stats.mean = cs.at("mean").get<double>();
        r.chain_stats.stddev = cs.at("stddev").get<double>();
        r.chain_stats.max = cs.at("max").get<double>();
        r.sample_seed = rj.at("sample_seed").get<std::uint64_t>();
        r.unembed_seed = rj.at("unembed_seed").get<std::uint64_t>();
        r.csv = rj.at("csv").get<std::string>();
        rep.records.push_back(std::move(r));
    }
    for (const auto& f : j.at("failures")) rep.failures.push_back(f.get<std::string>());
    return rep;
}

Comparison compare(const Report& a, const Report& b) {
    using FullKey = std::tuple<int, std::string, double, int>;
    auto full_key = [](const SettingRecord& r) {
        return FullKey{r.n, chain_kind_name(r.kind), r.chain_strength, r.sweeps};
    };
    std::map<FullKey, const SettingRecord*> ma, mb;
    for (const auto& r : a.records) ma[full_key(r)] = &r;
    for (const auto& r : b.records) mb[full_key(r)] = &r;

    std::vector<std::pair<const SettingRecord*, const SettingRecord*>> matched;
    for (const auto& [k, ra] : ma) {
        auto it = mb.find(k);
        if (it != mb.end()) matched.push_back({ra, it->second});
    }
    if (matched.empty()) {
        // same settings run under different embedding kinds
        using RelKey = std::tuple<int, double, int>;
        std::map<RelKey, const SettingRecord*> ra2, rb2;
        std::map<RelKey, int> ca, cb;
        for (const auto& r : a.records) {
            RelKey k{r.n, r.chain_strength, r.sweeps};
            ra2[k] = &r;
            ++ca[k];
        }
        for (const auto& r : b.records) {
            RelKey k{r.n, r.chain_strength, r.sweeps};
            rb2[k] = &r;
            ++cb[k];
        }
        for (const auto& [k, ra] : ra2) {
            auto it = rb2.find(k);
            if (it == rb2.end()) continue;
            if (ca[k] != 1 || cb[k] != 1)
                throw GraphError("ambiguous settings: multiple kinds per report");
            matched.push_back({ra, it->second});
        }
    }
    if (matched.empty()) throw GraphError("reports share no settings");

    Comparison c;
    for (const auto& [ra, rb] : matched) {
        CompareRow row;
        row.n = ra->n;
        row.chain_strength = ra->chain_strength;
        row.sweeps = ra->sweeps;
        row.kind_a = chain_kind_name(ra->kind);
        row.kind_b = chain_kind_name(rb->kind);
        row.d_break = ra->break_rate - rb->break_rate;
        row.d_median = ra->e_median - rb->e_median;
        row.d_best = ra->best_logical - rb->best_logical;
        (row.d_break < 0 ? c.break_neg : row.d_break > 0 ? c.break_pos : c.break_zero)++;
        (row.d_median < 0 ? c.median_neg
                          : row.d_median > 0 ? c.median_pos : c.median_zero)++;
        c.rows.push_back(std::move(row));
    }
    return c;
}

std::string comparison_text(const Comparison& c) {
    std::ostringstream out;
    out << "n,chain_strength,sweeps,kind_a,kind_b,d_break,d_median,d_best\n";
    char buf[192];
    for (const auto& r : c.rows) {
        std::snprintf(buf, sizeof buf, "%d,%g,%d,%s,%s,%.17g,%.17g,%.17g\n",
                      r.n, r.chain_strength, r.sweeps, r.kind_a.c_str(),
                      r.kind_b.c_str(), r.d_break, r.d_median, r.d_best);
        out << buf;
    }
    out << "break_rate deltas: " << c.break_neg << " negative, " << c.break_zero
        << " zero, " << c.break_pos << " positive\n";
    out << "median deltas: " << c.median_neg << " negative, " << c.median_zero
        << " zero, " << c.median_pos << " positive\n";
    return out.str();
}

std::string export_table2(const std::map<int, ChainStats>& by_n) {
    std::ostringstream out;
    out << "n\tchain_length (min, mean ± sigma, max)\n";
    char buf[96];
    for (const auto& [n, s] : by_n) {
        std::snprintf(buf, sizeof buf, "%d\t(%lld, %.3f ± %.3f, %lld)\n", n,
                      static_cast<long long>(std::llround(s.min)), s.mean,
                      s.stddev, static_cast<long long>(std::llround(s.max)));
        out << buf;
    }
    return out.str();
}

}  // namespace cliquebed
