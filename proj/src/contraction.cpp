#include "cliquebed/contraction.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>

#include <json.hpp>

#include "cliquebed/rng.hpp"

namespace cliquebed {

Pairing pairing_from_name(const std::string& s) {
    if (s == "aligned") return Pairing::aligned;
    if (s == "random") return Pairing::random;
    throw GraphError("unknown pairing rule: " + s);
}

std::string pairing_name(Pairing p) {
    return p == Pairing::aligned ? "aligned" : "random";
}

std::vector<std::vector<std::pair<std::uint32_t, int>>> ContractedGraph::adjacency() const {
    std::vector<std::vector<std::pair<std::uint32_t, int>>> adj(pairs.size());
    for (const auto& e : edges) {
        adj[e.i].emplace_back(e.j, e.multiplicity);
        adj[e.j].emplace_back(e.i, e.multiplicity);
    }
    for (auto& v : adj) std::sort(v.begin(), v.end());
    return adj;
}

std::vector<std::array<QubitId, 4>> enumerate_4_cliques(const Graph& g) {
    std::vector<std::array<QubitId, 4>> cliques;
    auto adj = g.adjacency();
    // Each clique {a<b<c<d} is found once from its lowest edge (a,b):
    // c,d are common neighbors above b, adjacent to each other. Iterating
    // edges in sorted order yields the lexicographic clique order directly.
    for (const auto& [a, b] : g.edges) {
        const auto& na = adj[g.index_of(a)];
        const auto& nb = adj[g.index_of(b)];
        std::vector<QubitId> common;
        std::set_intersection(
            std::upper_bound(na.begin(), na.end(), b), na.end(),
            std::upper_bound(nb.begin(), nb.end(), b), nb.end(),
            std::back_inserter(common));
        for (std::size_t x = 0; x < common.size(); ++x)
            for (std::size_t y = x + 1; y < common.size(); ++y)
                if (g.has_edge(common[x], common[y]))
                    cliques.push_back({a, b, common[x], common[y]});
    }
    return cliques;
}

ContractedGraph contract_4_cliques(const Graph& g, std::uint64_t seed,
                                   const ContractOptions& opts) {
    if (opts.min_multiplicity < 1 || opts.min_multiplicity > 4)
        throw GraphError("min_multiplicity must be in [1,4]");
    auto cliques = enumerate_4_cliques(g);
    auto rng = make_rng(seed);

    std::vector<char> used(g.num_nodes(), 0);
    std::vector<PairNode> pairs;
    for (const auto& K : cliques) {
        std::size_t p0 = g.index_of(K[0]), p1 = g.index_of(K[1]),
                    p2 = g.index_of(K[2]), p3 = g.index_of(K[3]);
        if (used[p0] || used[p1] || used[p2] || used[p3]) continue;
        int partner = 0;  // index into {b,c,d} paired with a
        if (opts.pairing == Pairing::random)
            partner = static_cast<int>(uniform_below(rng, 3));
        QubitId a = K[0];
        QubitId rest[3] = {K[1], K[2], K[3]};
        QubitId first = rest[partner];
        QubitId other1 = rest[(partner + 1) % 3], other2 = rest[(partner + 2) % 3];
        if (other1 > other2) std::swap(other1, other2);
        pairs.push_back({a, first});
        pairs.push_back({other1, other2});
        used[p0] = used[p1] = used[p2] = used[p3] = 1;
    }
    std::sort(pairs.begin(), pairs.end());

    // owner[qubit position] = pair index or -1
    std::vector<std::int32_t> owner(g.num_nodes(), -1);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        owner[g.index_of(pairs[i].lo)] = static_cast<std::int32_t>(i);
        owner[g.index_of(pairs[i].hi)] = static_cast<std::int32_t>(i);
    }

    std::map<std::pair<std::uint32_t, std::uint32_t>, int> mult;
    for (const auto& [a, b] : g.edges) {
        std::int32_t pa = owner[g.index_of(a)], pb = owner[g.index_of(b)];
        if (pa < 0 || pb < 0 || pa == pb) continue;
        auto ua = static_cast<std::uint32_t>(pa), ub = static_cast<std::uint32_t>(pb);
        if (ua > ub) std::swap(ua, ub);
        ++mult[{ua, ub}];
    }

    ContractedGraph cg;
    cg.pairs = std::move(pairs);
    cg.source_hash = g.hash();
    for (const auto& [key, m] : mult)
        if (m >= opts.min_multiplicity) cg.edges.push_back({key.first, key.second, m});
    return cg;
}

std::vector<ContractedGraph> components(const ContractedGraph& cg) {
    const std::size_t n = cg.num_pairs();
    std::vector<std::int32_t> comp(n, -1);
    auto adj = cg.adjacency();
    std::int32_t ncomp = 0;
    std::vector<std::uint32_t> stack;
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = ncomp;
        stack.push_back(static_cast<std::uint32_t>(s));
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            for (const auto& [w, m] : adj[v]) {
                if (comp[w] < 0) {
                    comp[w] = ncomp;
                    stack.push_back(w);
                }
            }
        }
        ++ncomp;
    }
    std::vector<std::vector<std::uint32_t>> members(ncomp);
    for (std::size_t v = 0; v < n; ++v)
        members[comp[v]].push_back(static_cast<std::uint32_t>(v));
    // largest first; ties by smallest member pair (members are index-sorted
    // and pair indices are (lo,hi)-sorted, so compare first members)
    std::vector<std::int32_t> order(ncomp);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::int32_t x, std::int32_t y) {
        if (members[x].size() != members[y].size())
            return members[x].size() > members[y].size();
        return cg.pairs[members[x][0]] < cg.pairs[members[y][0]];
    });

    std::vector<ContractedGraph> out;
    std::vector<std::int32_t> newidx(n, -1);
    for (std::int32_t c : order) {
        ContractedGraph sub;
        sub.source_hash = cg.source_hash;
        for (std::size_t k = 0; k < members[c].size(); ++k) {
            newidx[members[c][k]] = static_cast<std::int32_t>(k);
            sub.pairs.push_back(cg.pairs[members[c][k]]);
        }
        for (const auto& e : cg.edges) {
            if (comp[e.i] != c) continue;
            auto a = static_cast<std::uint32_t>(newidx[e.i]);
            auto b = static_cast<std::uint32_t>(newidx[e.j]);
            if (a > b) std::swap(a, b);
            sub.edges.push_back({a, b, e.multiplicity});
        }
        std::sort(sub.edges.begin(), sub.edges.end());
        out.push_back(std::move(sub));
    }
    return out;
}

ContractedGraph largest_component(const ContractedGraph& cg) {
    if (cg.pairs.empty()) return cg;
    return components(cg).front();
}

std::pair<double, double> coverage(const ContractedGraph& cg, const Graph& g) {
    if (cg.source_hash != g.hash())
        throw GraphError("contracted graph does not match this hardware graph");
    double qf = g.num_nodes() == 0
                    ? 0.0
                    : 2.0 * static_cast<double>(cg.num_pairs()) / static_cast<double>(g.num_nodes());
    long long msum = 0;
    for (const auto& e : cg.edges) msum += e.multiplicity;
    double cf = g.num_edges() == 0
                    ? 0.0
                    : static_cast<double>(msum) / static_cast<double>(g.num_edges());
    return {qf, cf};
}

void save_contracted(const ContractedGraph& cg, const std::string& path) {
    nlohmann::ordered_json j;
    auto pairs = nlohmann::ordered_json::array();
    for (const auto& p : cg.pairs) pairs.push_back({p.lo, p.hi});
    j["pairs"] = std::move(pairs);
    auto edges = nlohmann::ordered_json::array();
    for (const auto& e : cg.edges) edges.push_back({e.i, e.j, e.multiplicity});
    j["edges"] = std::move(edges);
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(cg.source_hash));
    j["source_hash"] = hex;
    std::ofstream out(path);
    if (!out) throw GraphError("cannot open for write: " + path);
    out << j.dump(1) << "\n";
}

ContractedGraph load_contracted(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open: " + path);
    nlohmann::json j;
    in >> j;
    ContractedGraph cg;
    for (const auto& p : j.at("pairs")) {
        PairNode pn{p.at(0).get<QubitId>(), p.at(1).get<QubitId>()};
        if (pn.lo >= pn.hi) throw GraphError("pair must be (lo, hi) with lo < hi");
        cg.pairs.push_back(pn);
    }
    if (!std::is_sorted(cg.pairs.begin(), cg.pairs.end()))
        throw GraphError("pairs not sorted");
    for (const auto& e : j.at("edges")) {
        ContractedEdge ce{e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>(),
                          e.at(2).get<int>()};
        if (ce.i >= ce.j || ce.j >= cg.pairs.size())
            throw GraphError("bad contracted edge");
        cg.edges.push_back(ce);
    }
    cg.source_hash = std::stoull(j.at("source_hash").get<std::string>(), nullptr, 16);
    return cg;
}

}  // namespace cliquebed
