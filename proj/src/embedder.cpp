#include "cliquebed/embedder.hpp"
#include <cstdlib>
#include <cstdio>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include <json.hpp>

#include "cliquebed/rng.hpp"

namespace cliquebed {

LogicalGraph make_logical(int n, std::vector<std::pair<int, int>> edges) {
    if (n < 1) throw GraphError("logical graph needs >= 1 node");
    for (auto& [u, v] : edges) {
        if (u == v || u < 0 || v < 0 || u >= n || v >= n)
            throw GraphError("bad logical edge");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return {n, std::move(edges)};
}

LogicalGraph complete_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return make_logical(n, std::move(edges));
}

bool TargetGraph::has_edge(std::uint32_t a, std::uint32_t b) const {
    if (a >= adj.size()) return false;
    return std::binary_search(adj[a].begin(), adj[a].end(), b);
}

std::uint64_t contracted_hash(const ContractedGraph& cg) {
    const std::uint64_t prime = 0x100000001b3ULL;
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= prime;
        }
    };
    feed(cg.source_hash);
    feed(cg.pairs.size());
    for (const auto& p : cg.pairs) {
        feed(p.lo);
        feed(p.hi);
    }
    feed(cg.edges.size());
    for (const auto& e : cg.edges) {
        feed(e.i);
        feed(e.j);
        feed(static_cast<std::uint64_t>(e.multiplicity));
    }
    return h;
}

TargetGraph target_from(const ContractedGraph& cg) {
    TargetGraph t;
    t.adj.resize(cg.num_pairs());
    for (const auto& e : cg.edges) {
        t.adj[e.i].push_back(e.j);
        t.adj[e.j].push_back(e.i);
    }
    for (auto& v : t.adj) std::sort(v.begin(), v.end());
    t.hash = contracted_hash(cg);
    return t;
}

TargetGraph target_from(const Graph& g) {
    TargetGraph t;
    t.adj.resize(g.num_nodes());
    for (const auto& [a, b] : g.edges) {
        auto ia = static_cast<std::uint32_t>(g.index_of(a));
        auto ib = static_cast<std::uint32_t>(g.index_of(b));
        t.adj[ia].push_back(ib);
        t.adj[ib].push_back(ia);
    }
    for (auto& v : t.adj) std::sort(v.begin(), v.end());
    t.hash = g.hash();
    return t;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One heuristic attempt; shared state is rebuilt per try.
class Attempt {
  public:
    Attempt(const LogicalGraph& src, const TargetGraph& tgt, std::uint64_t seed)
        : src_(src), tgt_(tgt), rng_(make_rng(seed)),
          n_(static_cast<std::uint32_t>(tgt.size())) {
        chains_.resize(src.n);
        usage_.assign(n_, 0);
        jit_.resize(n_);
        reroll();
        nbrs_.resize(src.n);
        for (auto [u, v] : src_.edges) {
            nbrs_[u].push_back(v);
            nbrs_[v].push_back(u);
        }
        for (auto& v : nbrs_) std::sort(v.begin(), v.end());
    }

    bool run(int max_passes) {
        const bool dbg = std::getenv("CLIQUEBED_EMBED_DEBUG") != nullptr;
        std::vector<int> order(src_.n);
        std::iota(order.begin(), order.end(), 0);
        shuffle_vec(order, rng_);
        for (int v : order)
            if (!embed_var(v, /*penalize=*/true)) return false;
        // polish from the best state seen: accept improving passes, revert
        // drifting ones; history keeps accruing so retries stay diverse
        auto score = [this] {
            std::size_t tot = 0;
            for (auto& c : chains_) tot += c.size();
            return std::make_pair(overfill(), tot);
        };
        auto best = score();
        auto best_chains = chains_;
        auto best_usage = usage_;
        int strikes = 0;
        for (int pass = 0; pass < max_passes; ++pass) {
            if (dbg)
                std::fprintf(stderr, "pass %d overfill %lld best %lld size %zu\n",
                             pass, overfill(), best.first, score().second);
            if (overfill() == 0) break;
            // a stagnating search gets a fresh tie-breaking landscape;
            // rerolling every pass would keep the argmin non-stationary and
            // stop chains from ever settling, but without occasional rerolls
            // the deterministic argmin freezes in its first local optimum
            if (strikes > 0 && strikes % 5 == 0) reroll();
            // worst offenders first: re-routing a clean chain early only
            // churns it, while the colliding chains are the ones whose
            // detours actually shrink the overfill
            shuffle_vec(order, rng_);
            std::vector<long long> bad(src_.n, 0);
            for (int v = 0; v < src_.n; ++v)
                for (auto x : chains_[v])
                    if (usage_[x] > 1) bad[v] += usage_[x] - 1;
            std::stable_sort(order.begin(), order.end(),
                             [&](int a, int b) { return bad[a] > bad[b]; });
            // hot zone: overfull nodes plus, under stagnation, a widening
            // halo around them; a colliding chain often cannot detour until
            // the clean chains walling it in are re-routed too
            std::vector<char> hot(n_, 0);
            {
                std::vector<std::uint32_t> front;
                for (std::uint32_t x = 0; x < n_; ++x)
                    if (usage_[x] > 1) {
                        hot[x] = 1;
                        front.push_back(x);
                    }
                for (int r = std::min(strikes / 3, 3); r > 0; --r) {
                    std::vector<std::uint32_t> nxt;
                    for (auto x : front)
                        for (auto y : tgt_.adj[x])
                            if (!hot[y]) {
                                hot[y] = 1;
                                nxt.push_back(y);
                            }
                    front = std::move(nxt);
                }
            }
            // when single-chain re-routes cycle without progress, evict the
            // worst offender together with every chain it collides with and
            // rebuild the group from scratch in random order, so a different
            // chain can claim the contested pocket
            if (strikes >= 10 && bad[order[0]] > 0) {
                std::vector<std::pair<int, int>> cand;
                for (int u = 0; u < src_.n; ++u) {
                    if (u == order[0] || bad[u] == 0) continue;
                    int ov = 0;
                    for (auto x : chains_[u])
                        if (usage_[x] > 1 &&
                            std::binary_search(chains_[order[0]].begin(),
                                               chains_[order[0]].end(), x))
                            ++ov;
                    if (ov > 0) cand.push_back({ov, u});
                }
                std::sort(cand.rbegin(), cand.rend());
                if (cand.size() > 3) cand.resize(3);
                std::vector<int> group{order[0]};
                for (auto [ov, u] : cand) group.push_back(u);
                for (int u : group) tear_out(u);
                shuffle_vec(group, rng_);
                for (int u : group)
                    if (!embed_var(u, true, true)) return false;
            }
            for (int v : order) {
                bool touch = bad[v] > 0;
                for (std::size_t i = 0; !touch && i < chains_[v].size(); ++i)
                    touch = hot[chains_[v][i]];
                if (!touch) continue;
                tear_out(v);
                if (!embed_var(v, true, true)) return false;
            }
            auto cur = score();
            if (cur < best) {
                best = cur;
                best_chains = chains_;
                best_usage = usage_;
                strikes = 0;
            } else if (++strikes % 5 == 0) {
                chains_ = best_chains;
                usage_ = best_usage;
                if (strikes >= 150) break;
            }
        }
        if (overfill() != 0) {
            chains_ = best_chains;
            usage_ = best_usage;
        }
        if (dbg && overfill() != 0) {
            std::vector<int> uh;
            for (int u : usage_) {
                if (u >= static_cast<int>(uh.size())) uh.resize(u + 1, 0);
                if (u > 1) ++uh[u];
            }
            for (std::size_t u = 2; u < uh.size(); ++u)
                if (uh[u]) std::fprintf(stderr, "usage %zu: %d nodes\n", u, uh[u]);
            for (std::uint32_t x = 0; x < n_; ++x)
                if (usage_[x] >= 3) {
                    std::fprintf(stderr, "node %u deg %zu usage %d vars", x,
                                 tgt_.adj[x].size(), usage_[x]);
                    for (int v = 0; v < src_.n; ++v)
                        if (std::binary_search(chains_[v].begin(),
                                               chains_[v].end(), x))
                            std::fprintf(stderr, " %d(%zu)", v, chains_[v].size());
                    std::fprintf(stderr, "\n");
                }
            for (int v = 0; v < src_.n; ++v) {
                long long b = 0;
                for (auto x : chains_[v])
                    if (usage_[x] > 1) b += usage_[x] - 1;
                std::fprintf(stderr, "var %d size %zu bad %lld\n", v,
                             chains_[v].size(), b);
            }
        }
        if (overfill() != 0) return false;
        reduce();
        return true;
    }

    std::map<int, std::vector<std::uint32_t>> chains() const {
        std::map<int, std::vector<std::uint32_t>> out;
        for (int v = 0; v < src_.n; ++v) {
            auto c = chains_[v];
            std::sort(c.begin(), c.end());
            out[v] = std::move(c);
        }
        return out;
    }

  private:
    long long overfill() const {
        long long s = 0;
        for (int u : usage_)
            if (u > 1) s += u - 1;
        return s;
    }

    // weight jitter: desymmetrizes otherwise equal-cost roots and paths so
    // chains spread out instead of cramming toward low node ids; small
    // enough to never override a real cost gap
    void reroll() {
        for (auto& j : jit_) j = uniform01(rng_) * 1e-6;
    }

    double weight(std::uint32_t x, bool penalize) const {
        if (!penalize) return usage_[x] > 0 ? kBlock : 1.0;
        // over-usage penalty, exponent quadratic in usage: crossing a chain
        // (usage 1) stays cheap so corridors can be traded, but usage 2+ is
        // priced out fast enough that squatting on a contested hub never
        // beats routing an honest star
        static const auto pow10 = [] {
            std::array<double, 13> t{};
            t[0] = 1.0;
            for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * 10.0;
            return t;
        }();
        int u = std::min(usage_[x], 12);
        return pow10[u] * (1.0 + jit_[x]);
    }

    void tear_out(int v) {
        for (auto x : chains_[v]) --usage_[x];
        chains_[v].clear();
    }

    // Shortest-path distances from chain(u) under current node weights.
    // dist includes the weight of the reached node, not of the sources.
    // Equal-cost parents are adopted by coin flip so repeated passes can
    // explore alternative routes instead of freezing on one.
    void dijkstra(const std::vector<std::uint32_t>& sources, bool penalize,
                  std::vector<double>& dist, std::vector<std::int64_t>& parent) {
        dist.assign(n_, kInf);
        parent.assign(n_, -1);
        using Item = std::pair<double, std::uint32_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
        // every parent edge points from an earlier-popped node to a
        // later-popped one, so the parent forest stays acyclic even when
        // penalty weights are large enough that float addition saturates
        // and distance plateaus make "equal cost" ambiguous
        std::vector<std::int32_t> pord(n_, -1);
        std::int32_t ctr = 0;
        for (auto s : sources) {
            dist[s] = 0.0;
            parent[s] = s;
            pq.push({0.0, s});
        }
        while (!pq.empty()) {
            auto [d, x] = pq.top();
            pq.pop();
            if (d > dist[x] || pord[x] >= 0) continue;
            pord[x] = ctr++;
            for (auto y : tgt_.adj[x]) {
                double nd = d + weight(y, penalize);
                if (nd < dist[y]) {
                    dist[y] = nd;
                    parent[y] = x;
                    pq.push({nd, y});
                } else if (nd == dist[y] && parent[y] != y && pord[y] < 0 &&
                           uniform_below(rng_, 2) == 0) {
                    parent[y] = x;
                }
            }
        }
    }

    bool embed_var(int v, bool penalize, bool donate = false) {
        std::vector<int> placed;
        for (int u : nbrs_[v])
            if (!chains_[u].empty()) placed.push_back(u);

        std::vector<std::uint32_t> chain;
        if (placed.empty()) {
            // no path costs to compare yet: seed the chain at a uniformly
            // random node among the cheapest, so restarts explore different
            // regions of the target
            double bw = kInf;
            for (std::uint32_t x = 0; x < n_; ++x) bw = std::min(bw, weight(x, penalize));
            if (bw >= kBlock) return false;
            std::vector<std::uint32_t> ties;
            for (std::uint32_t x = 0; x < n_; ++x)
                if (weight(x, penalize) == bw) ties.push_back(x);
            chain.push_back(ties[uniform_below(rng_, ties.size())]);
        } else {
            std::vector<std::vector<double>> dist(placed.size());
            std::vector<std::vector<std::int64_t>> parent(placed.size());
            for (std::size_t i = 0; i < placed.size(); ++i)
                dijkstra(chains_[placed[i]], penalize, dist[i], parent[i]);
            // root minimizing the summed path distances plus its own entry
            // cost; each path charges the root's weight independently, which
            // deliberately overprices occupied roots and pushes variables
            // apart instead of letting them stack. An arm with distance zero
            // means the root sits inside that neighbor chain, a state that
            // can never become valid, so it is billed like an adjacent root
            // instead of being free
            std::uint32_t root = n_;
            double best = kInf;
            for (std::uint32_t x = 0; x < n_; ++x) {
                double wx = weight(x, penalize);
                double s = wx;
                for (std::size_t i = 0; i < placed.size() && s < kInf; ++i)
                    s += dist[i][x] == 0.0 ? wx : dist[i][x];
                if (s == kInf) continue;
                if (s < best) {
                    best = s;
                    root = x;
                }
            }
            if (root == n_) return false;
            if (!penalize && best >= kBlock) return false;
            std::vector<std::vector<std::uint32_t>> path(placed.size());
            std::set<std::uint32_t> nodes{root};
            for (std::size_t i = 0; i < placed.size(); ++i) {
                std::int64_t x = root;
                while (parent[i][x] >= 0 && parent[i][x] != x) {
                    path[i].push_back(static_cast<std::uint32_t>(x));
                    x = parent[i][x];
                }
            }
            if (donate) {
                // hand the far half of each arm to the neighbor chain it
                // reaches: the neighbor grows toward this variable, so both
                // stay slim instead of one star carrying every corridor.
                // A node feeding several arms stays with this variable,
                // otherwise the other arms would lose their connection
                std::map<std::uint32_t, int> cnt;
                for (auto& p : path)
                    for (auto x : p) ++cnt[x];
                for (std::size_t i = 0; i < placed.size(); ++i) {
                    if (path[i].size() < 2) continue;
                    std::size_t keep = 1 + (path[i].size() - 1) / 2;
                    std::vector<std::uint32_t> give;
                    for (std::size_t j = path[i].size(); j-- > keep;) {
                        if (cnt[path[i][j]] != 1) break;
                        give.push_back(path[i][j]);
                        path[i].pop_back();
                    }
                    if (give.empty()) continue;
                    auto& cu = chains_[placed[i]];
                    cu.insert(cu.end(), give.begin(), give.end());
                    std::sort(cu.begin(), cu.end());
                    for (auto x : give) ++usage_[x];
                }
            }
            for (auto& p : path) nodes.insert(p.begin(), p.end());
            chain.assign(nodes.begin(), nodes.end());
            if (std::getenv("CLIQUEBED_EMBED_DEBUG"))
                std::fprintf(stderr, "embed %d placed %zu root %u best %g chain %zu\n",
                             v, placed.size(), root, best, chain.size());
        }
        chains_[v] = chain;
        for (auto x : chain) ++usage_[x];
        return true;
    }

    // With a valid (disjoint) embedding, reroute each chain through free
    // nodes only and strip removable nodes, until sizes stop shrinking.
    void reduce() {
        for (int round = 0; round < 8; ++round) {
            std::size_t before = 0;
            for (auto& c : chains_) before += c.size();
            for (int v = 0; v < src_.n; ++v) {
                auto old = chains_[v];
                tear_out(v);
                if (!embed_var(v, /*penalize=*/false) ||
                    chains_[v].size() > old.size()) {
                    tear_out(v);
                    chains_[v] = old;
                    for (auto x : old) ++usage_[x];
                }
                strip(v);
            }
            std::size_t after = 0;
            for (auto& c : chains_) after += c.size();
            if (after == before) break;
        }
    }

    // Greedy removal: drop a node if the chain stays connected, nonempty,
    // and every incident logical edge keeps a target edge.
    void strip(int v) {
        bool changed = true;
        while (changed) {
            changed = false;
            auto& chain = chains_[v];
            for (std::size_t k = chain.size(); k-- > 0;) {
                if (chain.size() == 1) return;
                std::uint32_t cand = chain[k];
                std::vector<std::uint32_t> rest;
                for (auto x : chain)
                    if (x != cand) rest.push_back(x);
                if (!connected(rest)) continue;
                bool covered = true;
                for (int u : nbrs_[v]) {
                    if (chains_[u].empty()) continue;
                    if (!touches(rest, chains_[u])) {
                        covered = false;
                        break;
                    }
                }
                if (!covered) continue;
                --usage_[cand];
                chain = rest;
                changed = true;
            }
        }
    }

    bool connected(const std::vector<std::uint32_t>& nodes) const {
        if (nodes.empty()) return false;
        std::set<std::uint32_t> in(nodes.begin(), nodes.end());
        std::vector<std::uint32_t> stack{nodes[0]};
        std::set<std::uint32_t> seen{nodes[0]};
        while (!stack.empty()) {
            auto x = stack.back();
            stack.pop_back();
            for (auto y : tgt_.adj[x])
                if (in.count(y) && !seen.count(y)) {
                    seen.insert(y);
                    stack.push_back(y);
                }
        }
        return seen.size() == in.size();
    }

    bool touches(const std::vector<std::uint32_t>& a,
                 const std::vector<std::uint32_t>& b) const {
        for (auto x : a)
            for (auto y : tgt_.adj[x])
                if (std::binary_search(b.begin(), b.end(), y) ||
                    std::find(b.begin(), b.end(), y) != b.end())
                    return true;
        return false;
    }

    static constexpr double kBlock = 1e30;

    const LogicalGraph& src_;
    const TargetGraph& tgt_;
    std::mt19937_64 rng_;
    std::uint32_t n_;
    std::vector<std::vector<std::uint32_t>> chains_;
    std::vector<int> usage_;
    std::vector<double> jit_;
    std::vector<std::vector<int>> nbrs_;
};

}  // namespace

Embedding find_embedding(const LogicalGraph& source, const TargetGraph& target,
                         const EmbedderParams& params) {
    if (source.n < 1) throw GraphError("empty source");
    if (target.size() == 0) throw GraphError("empty target");
    if (static_cast<std::size_t>(source.n) > target.size())
        throw EmbeddingNotFound("source larger than target");
    for (int t = 0; t < params.tries; ++t) {
        Attempt attempt(source, target, derive_seed(params.seed, static_cast<std::uint64_t>(t)));
        if (!attempt.run(params.max_passes)) continue;
        Embedding emb;
        emb.chains = attempt.chains();
        emb.target_hash = target.hash;
        if (validate(emb, source, target).empty()) return emb;
    }
    throw EmbeddingNotFound("no embedding found after " +
                            std::to_string(params.tries) + " tries");
}

std::vector<Violation> validate(const Embedding& emb, const LogicalGraph& source,
                                const TargetGraph& target) {
    std::vector<Violation> out;
    std::vector<int> owner(target.size(), -1);
    for (int v = 0; v < source.n; ++v) {
        auto it = emb.chains.find(v);
        if (it == emb.chains.end() || it->second.empty()) {
            out.push_back({"empty_chain", v, -1, -1});
            continue;
        }
        for (auto x : it->second) {
            if (x >= target.size()) {
                out.push_back({"unknown_node", v, -1, static_cast<long long>(x)});
                continue;
            }
            if (owner[x] >= 0)
                out.push_back({"overlap", owner[x], v, static_cast<long long>(x)});
            else
                owner[x] = v;
        }
    }
    // connectivity
    for (const auto& [v, chain] : emb.chains) {
        if (chain.empty()) continue;
        std::set<std::uint32_t> in(chain.begin(), chain.end());
        std::vector<std::uint32_t> stack{chain[0]};
        std::set<std::uint32_t> seen{chain[0]};
        while (!stack.empty()) {
            auto x = stack.back();
            stack.pop_back();
            if (x >= target.size()) continue;
            for (auto y : target.adj[x])
                if (in.count(y) && !seen.count(y)) {
                    seen.insert(y);
                    stack.push_back(y);
                }
        }
        if (seen.size() != in.size()) out.push_back({"disconnected", v, -1, -1});
    }
    // logical edge coverage
    for (auto [u, v] : source.edges) {
        auto iu = emb.chains.find(u), iv = emb.chains.find(v);
        if (iu == emb.chains.end() || iv == emb.chains.end()) continue;
        bool found = false;
        for (auto x : iu->second) {
            if (x >= target.size()) continue;
            for (auto y : target.adj[x])
                if (std::binary_search(iv->second.begin(), iv->second.end(), y)) {
                    found = true;
                    break;
                }
            if (found) break;
        }
        if (!found) out.push_back({"uncovered_edge", u, v, -1});
    }
    return out;
}

ChainStats chain_length_stats(const Embedding& emb, int qubits_per_node) {
    if (qubits_per_node != 1 && qubits_per_node != 2)
        throw GraphError("qubits_per_node must be 1 or 2");
    ChainStats s;
    if (emb.chains.empty()) return s;
    std::vector<double> lens;
    for (const auto& [v, chain] : emb.chains)
        lens.push_back(static_cast<double>(chain.size()) * qubits_per_node);
    s.min = *std::min_element(lens.begin(), lens.end());
    s.max = *std::max_element(lens.begin(), lens.end());
    double sum = std::accumulate(lens.begin(), lens.end(), 0.0);
    s.mean = sum / static_cast<double>(lens.size());
    double acc = 0;
    for (double x : lens) acc += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(acc / static_cast<double>(lens.size()));
    return s;
}

void save_embedding(const Embedding& emb, const std::string& path) {
    nlohmann::ordered_json j;
    auto chains = nlohmann::ordered_json::object();
    for (const auto& [v, chain] : emb.chains) chains[std::to_string(v)] = chain;
    j["chains"] = std::move(chains);
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(emb.target_hash));
    j["target_hash"] = hex;
    std::ofstream out(path);
    if (!out) throw GraphError("cannot open for write: " + path);
    out << j.dump(1) << "\n";
}

Embedding load_embedding(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open: " + path);
    nlohmann::json j;
    in >> j;
    Embedding emb;
    for (const auto& [key, val] : j.at("chains").items()) {
        std::vector<std::uint32_t> chain;
        for (const auto& x : val) chain.push_back(x.get<std::uint32_t>());
        std::sort(chain.begin(), chain.end());
        emb.chains[std::stoi(key)] = std::move(chain);
    }
    emb.target_hash = std::stoull(j.at("target_hash").get<std::string>(), nullptr, 16);
    return emb;
}

}  // namespace cliquebed
