#include "cliquebed/chains.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "cliquebed/rng.hpp"

namespace cliquebed {

std::string chain_kind_name(ChainKind k) {
    return k == ChainKind::four_clique ? "four_clique" : "linear";
}

ChainKind chain_kind_from(const std::string& name) {
    if (name == "four_clique") return ChainKind::four_clique;
    if (name == "linear") return ChainKind::linear;
    throw GraphError("unknown chain kind: " + name);
}

std::size_t PhysicalEmbedding::num_qubits() const {
    std::size_t n = 0;
    for (const auto& [v, c] : chains) n += c.size();
    return n;
}

std::size_t PhysicalEmbedding::num_intra_couplers() const {
    std::size_t n = 0;
    for (const auto& [v, c] : intra_couplers) n += c.size();
    return n;
}

namespace {

std::vector<QubitEdge> edges_between(const std::vector<QubitId>& a,
                                     const std::vector<QubitId>& b,
                                     const Graph& g) {
    std::vector<QubitEdge> out;
    for (auto x : a)
        for (auto y : b)
            if (x != y && g.has_edge(x, y))
                out.push_back({std::min(x, y), std::max(x, y)});
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<QubitEdge> edges_within(const std::vector<QubitId>& a, const Graph& g) {
    std::vector<QubitEdge> out;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            if (g.has_edge(a[i], a[j]))
                out.push_back({std::min(a[i], a[j]), std::max(a[i], a[j])});
    std::sort(out.begin(), out.end());
    return out;
}

bool connected_set(const std::vector<QubitId>& nodes,
                   const std::vector<QubitEdge>& edges) {
    if (nodes.empty()) return false;
    std::map<QubitId, std::vector<QubitId>> adj;
    for (auto q : nodes) adj[q];
    for (const auto& [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::set<QubitId> seen{nodes[0]};
    std::vector<QubitId> stack{nodes[0]};
    while (!stack.empty()) {
        auto x = stack.back();
        stack.pop_back();
        for (auto y : adj[x])
            if (!seen.count(y)) {
                seen.insert(y);
                stack.push_back(y);
            }
    }
    return seen.size() == nodes.size();
}

}  // namespace

PhysicalEmbedding expand(const Embedding& cemb, const ContractedGraph& cg,
                         const Graph& g) {
    if (cemb.target_hash != 0 && cemb.target_hash != contracted_hash(cg))
        throw GraphError("embedding does not reference this contracted graph");
    PhysicalEmbedding pe;
    pe.kind = ChainKind::four_clique;
    pe.target_hash = g.hash();

    std::map<std::uint32_t, int> owner;
    for (const auto& [v, cchain] : cemb.chains) {
        std::vector<QubitId> qubits;
        std::vector<PairNode> pairs;
        for (auto idx : cchain) {
            if (idx >= cg.num_pairs())
                throw GraphError("chain references pair " + std::to_string(idx) +
                                 " outside the contracted graph");
            const auto& p = cg.pairs[idx];
            qubits.push_back(p.lo);
            qubits.push_back(p.hi);
            pairs.push_back(p);
            owner[idx] = v;
        }
        std::sort(qubits.begin(), qubits.end());
        std::sort(pairs.begin(), pairs.end());
        pe.chains[v] = std::move(qubits);
        pe.source_contracted[v] = std::move(pairs);
        pe.intra_couplers[v] = edges_within(pe.chains[v], g);
    }

    for (const auto& e : cg.edges) {
        auto iu = owner.find(e.i), iv = owner.find(e.j);
        if (iu == owner.end() || iv == owner.end()) continue;
        int u = iu->second, v = iv->second;
        if (u == v) continue;
        const auto& pi = cg.pairs[e.i];
        const auto& pj = cg.pairs[e.j];
        auto hw = edges_between({pi.lo, pi.hi}, {pj.lo, pj.hi}, g);
        if (u > v) std::swap(u, v);
        auto& bucket = pe.logical_edge_couplers[{u, v}];
        bucket.insert(bucket.end(), hw.begin(), hw.end());
    }
    for (auto& [k, v] : pe.logical_edge_couplers) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return pe;
}

namespace {

// Backtracking state for the per-pair qubit selection.
struct Selector {
    const PhysicalEmbedding& pe;
    const Graph& g;
    std::vector<int> vars;                       // assignment order, by variable
    std::map<int, std::size_t> var_pos;          // var -> position in vars
    std::map<PairNode, QubitId> choice;
    std::mt19937_64 rng;
    long long states = 0;
    static constexpr long long kMaxStates = 10000;

    bool feasible_var(int v) const {
        std::vector<QubitId> sel;
        for (const auto& p : pe.source_contracted.at(v)) sel.push_back(choice.at(p));
        std::sort(sel.begin(), sel.end());
        if (!connected_set(sel, edges_within(sel, g))) return false;
        // logical edges whose other side is already fully assigned
        for (const auto& [key, couplers] : pe.logical_edge_couplers) {
            int other;
            if (key.first == v) other = key.second;
            else if (key.second == v) other = key.first;
            else continue;
            if (var_pos.at(other) > var_pos.at(v)) continue;
            std::vector<QubitId> osel;
            for (const auto& p : pe.source_contracted.at(other))
                osel.push_back(choice.at(p));
            std::sort(osel.begin(), osel.end());
            bool kept = false;
            for (const auto& [a, b] : couplers)
                if (std::binary_search(sel.begin(), sel.end(), a)
                        ? std::binary_search(osel.begin(), osel.end(), b)
                        : (std::binary_search(osel.begin(), osel.end(), a) &&
                           std::binary_search(sel.begin(), sel.end(), b))) {
                    kept = true;
                    break;
                }
            if (!kept) return false;
        }
        return true;
    }

    bool assign(std::size_t vi, std::size_t pi) {
        if (vi == vars.size()) return true;
        int v = vars[vi];
        const auto& pairs = pe.source_contracted.at(v);
        if (pi == pairs.size()) {
            if (!feasible_var(v)) return false;
            return assign(vi + 1, 0);
        }
        const auto& p = pairs[pi];
        QubitId first = uniform_below(rng, 2) ? p.hi : p.lo;
        QubitId second = first == p.lo ? p.hi : p.lo;
        for (QubitId q : {first, second}) {
            if (++states > kMaxStates)
                throw NoValidSelection("linear selection search exceeded 10^4 states");
            choice[p] = q;
            if (assign(vi, pi + 1)) return true;
        }
        choice.erase(p);
        return false;
    }
};

}  // namespace

PhysicalEmbedding derive_linear(const PhysicalEmbedding& pe, const Graph& g,
                                std::uint64_t seed) {
    if (pe.kind != ChainKind::four_clique)
        throw GraphError("derive_linear needs a four_clique embedding");
    if (pe.source_contracted.empty())
        throw GraphError("derive_linear needs the contracted back-reference");

    std::map<PairNode, QubitId> choice;
    for (const auto& [v, pairs] : pe.source_contracted)
        for (const auto& p : pairs) choice[p] = p.lo;

    auto selected = [&](int v) {
        std::vector<QubitId> sel;
        for (const auto& p : pe.source_contracted.at(v)) sel.push_back(choice.at(p));
        std::sort(sel.begin(), sel.end());
        return sel;
    };
    auto all_ok = [&]() {
        for (const auto& [v, pairs] : pe.source_contracted) {
            auto sel = selected(v);
            if (!connected_set(sel, edges_within(sel, g))) return false;
        }
        for (const auto& [key, couplers] : pe.logical_edge_couplers) {
            auto su = selected(key.first);
            auto sv = selected(key.second);
            bool kept = false;
            for (const auto& [a, b] : couplers) {
                bool au = std::binary_search(su.begin(), su.end(), a);
                bool bu = std::binary_search(su.begin(), su.end(), b);
                bool av = std::binary_search(sv.begin(), sv.end(), a);
                bool bv = std::binary_search(sv.begin(), sv.end(), b);
                if ((au && bv) || (av && bu)) {
                    kept = true;
                    break;
                }
            }
            if (!kept) return false;
        }
        return true;
    };

    if (!all_ok()) {
        Selector sel{pe, g, {}, {}, {}, make_rng(seed)};
        for (const auto& [v, pairs] : pe.source_contracted) sel.vars.push_back(v);
        shuffle_vec(sel.vars, sel.rng);
        for (std::size_t i = 0; i < sel.vars.size(); ++i) sel.var_pos[sel.vars[i]] = i;
        if (!sel.assign(0, 0))
            throw NoValidSelection("no qubit selection keeps all logical edges");
        choice = std::move(sel.choice);
    }

    PhysicalEmbedding out;
    out.kind = ChainKind::linear;
    out.target_hash = pe.target_hash;
    out.source_contracted = pe.source_contracted;
    for (const auto& [v, pairs] : pe.source_contracted) {
        std::vector<QubitId> sel;
        for (const auto& p : pairs) sel.push_back(choice.at(p));
        std::sort(sel.begin(), sel.end());
        out.intra_couplers[v] = edges_within(sel, g);
        out.chains[v] = std::move(sel);
    }
    for (const auto& [key, couplers] : pe.logical_edge_couplers) {
        const auto& su = out.chains.at(key.first);
        const auto& sv = out.chains.at(key.second);
        std::vector<QubitEdge> kept;
        for (const auto& e : couplers) {
            bool in_u = std::binary_search(su.begin(), su.end(), e.first) ||
                        std::binary_search(su.begin(), su.end(), e.second);
            bool in_v = std::binary_search(sv.begin(), sv.end(), e.first) ||
                        std::binary_search(sv.begin(), sv.end(), e.second);
            if (in_u && in_v) kept.push_back(e);
        }
        out.logical_edge_couplers[key] = std::move(kept);
    }
    return out;
}

std::vector<int> degree_profile(const PhysicalEmbedding& pe, int var) {
    auto ic = pe.chains.find(var);
    if (ic == pe.chains.end()) throw GraphError("unknown variable");
    std::map<QubitId, int> deg;
    for (auto q : ic->second) deg[q] = 0;
    auto ie = pe.intra_couplers.find(var);
    if (ie != pe.intra_couplers.end())
        for (const auto& [a, b] : ie->second) {
            ++deg[a];
            ++deg[b];
        }
    std::vector<int> out;
    for (const auto& [q, d] : deg) out.push_back(d);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Violation> validate_physical(const PhysicalEmbedding& pe,
                                         const Graph& g) {
    std::vector<Violation> out;
    std::map<QubitId, int> owner;
    for (const auto& [v, chain] : pe.chains) {
        if (chain.empty()) {
            out.push_back({"empty_chain", v, -1, -1});
            continue;
        }
        for (auto q : chain) {
            if (!g.has_node(q)) {
                out.push_back({"unknown_node", v, -1, static_cast<long long>(q)});
                continue;
            }
            auto [it, fresh] = owner.emplace(q, v);
            if (!fresh) out.push_back({"overlap", it->second, v, static_cast<long long>(q)});
        }
        auto ie = pe.intra_couplers.find(v);
        const std::vector<QubitEdge> none;
        const auto& intra = ie == pe.intra_couplers.end() ? none : ie->second;
        for (const auto& [a, b] : intra)
            if (!g.has_edge(a, b))
                out.push_back({"missing_coupler", v, -1,
                               static_cast<long long>(a)});
        if (!connected_set(chain, intra)) out.push_back({"disconnected", v, -1, -1});
        auto sc = pe.source_contracted.find(v);
        if (sc != pe.source_contracted.end()) {
            std::size_t want = pe.kind == ChainKind::four_clique
                                   ? 2 * sc->second.size()
                                   : sc->second.size();
            if (chain.size() != want) out.push_back({"bad_size", v, -1, -1});
        }
    }
    for (const auto& [key, couplers] : pe.logical_edge_couplers) {
        if (couplers.empty()) {
            out.push_back({"uncovered_edge", key.first, key.second, -1});
            continue;
        }
        for (const auto& [a, b] : couplers)
            if (!g.has_edge(a, b))
                out.push_back({"missing_coupler", key.first, key.second,
                               static_cast<long long>(a)});
    }
    return out;
}

ChainStats physical_chain_stats(const PhysicalEmbedding& pe) {
    ChainStats s;
    if (pe.chains.empty()) return s;
    std::vector<double> lens;
    for (const auto& [v, chain] : pe.chains)
        lens.push_back(static_cast<double>(chain.size()));
    s.min = *std::min_element(lens.begin(), lens.end());
    s.max = *std::max_element(lens.begin(), lens.end());
    double sum = 0;
    for (double x : lens) sum += x;
    s.mean = sum / static_cast<double>(lens.size());
    double acc = 0;
    for (double x : lens) acc += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(acc / static_cast<double>(lens.size()));
    return s;
}

void save_physical(const PhysicalEmbedding& pe, const std::string& path) {
    nlohmann::ordered_json j;
    j["kind"] = chain_kind_name(pe.kind);
    auto chains = nlohmann::ordered_json::object();
    for (const auto& [v, chain] : pe.chains) chains[std::to_string(v)] = chain;
    j["chains"] = std::move(chains);
    auto intra = nlohmann::ordered_json::object();
    for (const auto& [v, edges] : pe.intra_couplers) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& [a, b] : edges) arr.push_back({a, b});
        intra[std::to_string(v)] = std::move(arr);
    }
    j["intra_couplers"] = std::move(intra);
    auto lec = nlohmann::ordered_json::object();
    for (const auto& [key, edges] : pe.logical_edge_couplers) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& [a, b] : edges) arr.push_back({a, b});
        lec[std::to_string(key.first) + "-" + std::to_string(key.second)] =
            std::move(arr);
    }
    j["logical_edge_couplers"] = std::move(lec);
    if (!pe.source_contracted.empty()) {
        auto sc = nlohmann::ordered_json::object();
        for (const auto& [v, pairs] : pe.source_contracted) {
            auto arr = nlohmann::ordered_json::array();
            for (const auto& p : pairs) arr.push_back({p.lo, p.hi});
            sc[std::to_string(v)] = std::move(arr);
        }
        j["source_contracted"] = std::move(sc);
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(pe.target_hash));
    j["target_hash"] = hex;
    std::ofstream outf(path);
    if (!outf) throw GraphError("cannot open for write: " + path);
    outf << j.dump(1) << "\n";
}

PhysicalEmbedding load_physical(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open: " + path);
    nlohmann::json j;
    in >> j;
    PhysicalEmbedding pe;
    pe.kind = chain_kind_from(j.at("kind").get<std::string>());
    for (const auto& [key, val] : j.at("chains").items()) {
        std::vector<QubitId> chain;
        for (const auto& q : val) chain.push_back(q.get<QubitId>());
        std::sort(chain.begin(), chain.end());
        pe.chains[std::stoi(key)] = std::move(chain);
    }
    for (const auto& [key, val] : j.at("intra_couplers").items()) {
        std::vector<QubitEdge> edges;
        for (const auto& e : val)
            edges.push_back({e.at(0).get<QubitId>(), e.at(1).get<QubitId>()});
        std::sort(edges.begin(), edges.end());
        pe.intra_couplers[std::stoi(key)] = std::move(edges);
    }
    for (const auto& [key, val] : j.at("logical_edge_couplers").items()) {
        auto dash = key.find('-');
        if (dash == std::string::npos) throw GraphError("bad logical edge key: " + key);
        int u = std::stoi(key.substr(0, dash));
        int v = std::stoi(key.substr(dash + 1));
        std::vector<QubitEdge> edges;
        for (const auto& e : val)
            edges.push_back({e.at(0).get<QubitId>(), e.at(1).get<QubitId>()});
        std::sort(edges.begin(), edges.end());
        pe.logical_edge_couplers[{u, v}] = std::move(edges);
    }
    if (j.contains("source_contracted"))
        for (const auto& [key, val] : j["source_contracted"].items()) {
            std::vector<PairNode> pairs;
            for (const auto& p : val)
                pairs.push_back({p.at(0).get<QubitId>(), p.at(1).get<QubitId>()});
            std::sort(pairs.begin(), pairs.end());
            pe.source_contracted[std::stoi(key)] = std::move(pairs);
        }
    pe.target_hash = std::stoull(j.at("target_hash").get<std::string>(), nullptr, 16);
    return pe;
}

}  // namespace cliquebed
