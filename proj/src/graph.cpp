#include "cliquebed/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cliquebed {

std::string family_name(Family f) {
    switch (f) {
        case Family::chimera: return "chimera";
        case Family::pegasus: return "pegasus";
        case Family::zephyr: return "zephyr";
        case Family::custom: return "custom";
    }
    throw GraphError("bad family enum");
}

Family family_from_name(const std::string& s) {
    if (s == "chimera") return Family::chimera;
    if (s == "pegasus") return Family::pegasus;
    if (s == "zephyr") return Family::zephyr;
    if (s == "custom") return Family::custom;
    throw GraphError("unknown family: " + s);
}

bool Graph::has_node(QubitId q) const {
    return std::binary_search(nodes.begin(), nodes.end(), q);
}

bool Graph::has_edge(QubitId a, QubitId b) const {
    if (a > b) std::swap(a, b);
    return std::binary_search(edges.begin(), edges.end(), QubitEdge{a, b});
}

std::size_t Graph::index_of(QubitId q) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), q);
    if (it == nodes.end() || *it != q) throw GraphError("unknown qubit id");
    return static_cast<std::size_t>(it - nodes.begin());
}

std::vector<std::vector<QubitId>> Graph::adjacency() const {
    std::vector<std::vector<QubitId>> adj(nodes.size());
    for (const auto& [a, b] : edges) {
        adj[index_of(a)].push_back(b);
        adj[index_of(b)].push_back(a);
    }
    for (auto& v : adj) std::sort(v.begin(), v.end());
    return adj;
}

int Graph::max_degree() const {
    std::vector<int> deg(nodes.size(), 0);
    for (const auto& [a, b] : edges) {
        ++deg[index_of(a)];
        ++deg[index_of(b)];
    }
    int best = 0;
    for (int d : deg) best = std::max(best, d);
    return best;
}

std::uint64_t Graph::hash() const {
    const std::uint64_t prime = 0x100000001b3ULL;
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= prime;
        }
    };
    for (char c : family_name(family)) {
        h ^= static_cast<unsigned char>(c);
        h *= prime;
    }
    feed(static_cast<std::uint64_t>(m));
    feed(nodes.size());
    for (QubitId q : nodes) feed(q);
    feed(edges.size());
    for (const auto& [a, b] : edges) {
        feed(a);
        feed(b);
    }
    return h;
}

Graph make_graph(std::vector<QubitId> nodes, std::vector<QubitEdge> edges,
                 Family family, int m) {
    Graph g;
    g.family = family;
    g.m = m;
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    for (auto& [a, b] : edges) {
        if (a == b) throw GraphError("self loop on qubit " + std::to_string(a));
        if (a > b) std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    auto dup = std::adjacent_find(edges.begin(), edges.end());
    if (dup != edges.end()) throw GraphError("duplicate edge");
    g.nodes = std::move(nodes);
    g.edges = std::move(edges);
    for (const auto& [a, b] : g.edges) {
        if (!g.has_node(a) || !g.has_node(b))
            throw GraphError("edge endpoint not in node set");
    }
    return g;
}

namespace {

Graph gen_chimera(int m) {
    const int t = 4;
    auto idx = [&](int i, int j, int u, int k) {
        return static_cast<QubitId>(((i * m + j) * 2 + u) * t + k);
    };
    std::vector<QubitId> nodes;
    std::vector<QubitEdge> edges;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int u = 0; u < 2; ++u)
                for (int k = 0; k < t; ++k) nodes.push_back(idx(i, j, u, k));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int k0 = 0; k0 < t; ++k0)
                for (int k1 = 0; k1 < t; ++k1)
                    edges.emplace_back(idx(i, j, 0, k0), idx(i, j, 1, k1));
            for (int k = 0; k < t; ++k) {
                if (i + 1 < m) edges.emplace_back(idx(i, j, 0, k), idx(i + 1, j, 0, k));
                if (j + 1 < m) edges.emplace_back(idx(i, j, 1, k), idx(i, j + 1, 1, k));
            }
        }
    }
    return make_graph(std::move(nodes), std::move(edges), Family::chimera, m);
}

Graph gen_pegasus(int m) {
    const int m1 = m - 1;
    static const int off0[12] = {2, 2, 2, 2, 10, 10, 10, 10, 6, 6, 6, 6};
    static const int off1[12] = {6, 6, 6, 6, 2, 2, 2, 2, 10, 10, 10, 10};
    auto label = [&](int u, int w, int k, int z) {
        return static_cast<QubitId>(u * 12 * m * m1 + w * 12 * m1 + k * m1 + z);
    };
    std::vector<QubitId> nodes;
    std::vector<QubitEdge> edges;
    for (int u = 0; u < 2; ++u)
        for (int w = 0; w < m; ++w)
            for (int k = 0; k < 12; ++k)
                for (int z = 0; z < m1; ++z) nodes.push_back(label(u, w, k, z));
    // external couplers (along a line)
    for (int u = 0; u < 2; ++u)
        for (int w = 0; w < m; ++w)
            for (int k = 0; k < 12; ++k)
                for (int z = 0; z + 1 < m1; ++z)
                    edges.emplace_back(label(u, w, k, z), label(u, w, k, z + 1));
    // odd couplers (offset twins)
    for (int u = 0; u < 2; ++u)
        for (int w = 0; w < m; ++w)
            for (int k = 0; k < 12; k += 2)
                for (int z = 0; z < m1; ++z)
                    edges.emplace_back(label(u, w, k, z), label(u, w, k + 1, z));
    // internal couplers; boundary tiles drop the out-of-range offsets
    for (int w = 0; w < m; ++w) {
        for (int kk = 0; kk < 12; ++kk) {
            int k_lo = (w == 0) ? off1[kk] : 0;
            int k_hi = (w < m1) ? 12 : off1[kk];
            for (int k = k_lo; k < k_hi; ++k)
                for (int z = 0; z < m1; ++z)
                    edges.emplace_back(
                        label(0, w, k, z),
                        label(1, z + (kk < off0[k] ? 1 : 0), kk,
                              w - (k < off1[kk] ? 1 : 0)));
        }
    }
    return make_graph(std::move(nodes), std::move(edges), Family::pegasus, m);
}

Graph gen_zephyr(int m) {
    const int t = 4;
    const int M = 2 * m + 1;
    auto idx = [&](int u, int w, int k, int j, int z) {
        return static_cast<QubitId>((((u * M + w) * t + k) * 2 + j) * m + z);
    };
    std::vector<QubitId> nodes;
    std::vector<QubitEdge> edges;
    for (int u = 0; u < 2; ++u)
        for (int w = 0; w < M; ++w)
            for (int k = 0; k < t; ++k)
                for (int j = 0; j < 2; ++j)
                    for (int z = 0; z < m; ++z) nodes.push_back(idx(u, w, k, j, z));
    for (int u = 0; u < 2; ++u) {
        for (int w = 0; w < M; ++w) {
            for (int k = 0; k < t; ++k) {
                for (int j = 0; j < 2; ++j)
                    for (int z = 0; z + 1 < m; ++z)
                        edges.emplace_back(idx(u, w, k, j, z), idx(u, w, k, j, z + 1));
                for (int z = 0; z < m; ++z) {
                    edges.emplace_back(idx(u, w, k, 0, z), idx(u, w, k, 1, z));
                    if (z + 1 < m)
                        edges.emplace_back(idx(u, w, k, 1, z), idx(u, w, k, 0, z + 1));
                }
            }
        }
    }
    // internal: vertical (0,w,k,j,z) spans rows [2z+j, 2z+j+2) in column w;
    // horizontal (1,w',k',j',z') spans columns [2z'+j', 2z'+j'+2) in row w'
    for (int w = 0; w < M; ++w) {
        for (int k = 0; k < t; ++k) {
            for (int j = 0; j < 2; ++j) {
                for (int z = 0; z < m; ++z) {
                    for (int wp = 2 * z + j; wp <= 2 * z + j + 1; ++wp) {
                        if (wp < 0 || wp >= M) continue;
                        for (int kp = 0; kp < t; ++kp) {
                            for (int start = w - 1; start <= w; ++start) {
                                if (start < 0 || start > 2 * m - 1) continue;
                                int zp = start / 2, jp = start % 2;
                                edges.emplace_back(idx(0, w, k, j, z),
                                                   idx(1, wp, kp, jp, zp));
                            }
                        }
                    }
                }
            }
        }
    }
    return make_graph(std::move(nodes), std::move(edges), Family::zephyr, m);
}

}  // namespace

Graph generate(Family f, int m) {
    if (m < 1) throw GraphError("m must be >= 1");
    switch (f) {
        case Family::chimera: return gen_chimera(m);
        case Family::pegasus:
            if (m < 2) throw GraphError("pegasus requires m >= 2");
            return gen_pegasus(m);
        case Family::zephyr: return gen_zephyr(m);
        case Family::custom: throw GraphError("cannot generate custom family");
    }
    throw GraphError("bad family enum");
}

void save_graph(const Graph& g, const std::string& path) {
    nlohmann::ordered_json j;
    j["family"] = family_name(g.family);
    j["m"] = g.m;
    j["nodes"] = g.nodes;
    auto edges = nlohmann::ordered_json::array();
    for (const auto& [a, b] : g.edges) edges.push_back({a, b});
    j["edges"] = std::move(edges);
    j["defect_nodes"] = g.defect_nodes;
    auto dedges = nlohmann::ordered_json::array();
    for (const auto& [a, b] : g.defect_edges) dedges.push_back({a, b});
    j["defect_edges"] = std::move(dedges);
    std::ofstream out(path);
    if (!out) throw GraphError("cannot open for write: " + path);
    out << j.dump(1) << "\n";
}

namespace {

Graph load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw GraphError("json parse error in " + path + ": " + e.what());
    }
    std::vector<QubitId> nodes;
    for (const auto& n : j.at("nodes")) nodes.push_back(n.get<QubitId>());
    std::vector<QubitEdge> edges;
    for (const auto& e : j.at("edges"))
        edges.emplace_back(e.at(0).get<QubitId>(), e.at(1).get<QubitId>());
    Family fam = Family::custom;
    int m = 0;
    if (j.contains("family")) fam = family_from_name(j["family"].get<std::string>());
    if (j.contains("m")) m = j["m"].get<int>();
    Graph g = make_graph(std::move(nodes), std::move(edges), fam, m);
    if (j.contains("defect_nodes"))
        for (const auto& n : j["defect_nodes"]) g.defect_nodes.push_back(n.get<QubitId>());
    if (j.contains("defect_edges"))
        for (const auto& e : j["defect_edges"])
            g.defect_edges.emplace_back(e.at(0).get<QubitId>(), e.at(1).get<QubitId>());
    return g;
}

Graph load_edgelist(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open: " + path);
    std::vector<QubitEdge> edges;
    std::set<QubitId> nodeset;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        long long a, b;
        if (!(ss >> a)) continue;  // blank or comment-only line
        if (!(ss >> b) || a < 0 || b < 0)
            throw GraphError(path + ":" + std::to_string(lineno) + ": expected 'u v'");
        edges.emplace_back(static_cast<QubitId>(a), static_cast<QubitId>(b));
        nodeset.insert(static_cast<QubitId>(a));
        nodeset.insert(static_cast<QubitId>(b));
    }
    std::vector<QubitId> nodes(nodeset.begin(), nodeset.end());
    return make_graph(std::move(nodes), std::move(edges));
}

}  // namespace

Graph load_graph(const std::string& path, GraphFormat fmt) {
    return fmt == GraphFormat::json ? load_json(path) : load_edgelist(path);
}

Graph load_graph(const std::string& path) {
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
        return load_graph(path, GraphFormat::json);
    return load_graph(path, GraphFormat::edgelist);
}

void save_graph(const Graph& g, const std::string& path, GraphFormat fmt) {
    if (fmt == GraphFormat::json) {
        save_graph(g, path);
        return;
    }
    std::ofstream out(path);
    if (!out) throw GraphError("cannot open for write: " + path);
    out << "# family: " << family_name(g.family) << "\n";
    out << "# m: " << g.m << "\n";
    for (const auto& [a, b] : g.edges) out << a << " " << b << "\n";
}

Graph apply_defects(const Graph& g, const std::vector<QubitId>& dead_nodes,
                    const std::vector<QubitEdge>& dead_edges) {
    for (QubitId q : dead_nodes)
        if (!g.has_node(q)) throw GraphError("defect node not in graph: " + std::to_string(q));
    std::set<QubitId> dead(dead_nodes.begin(), dead_nodes.end());
    std::set<QubitEdge> deadE;
    for (auto [a, b] : dead_edges) {
        if (a > b) std::swap(a, b);
        if (!g.has_edge(a, b))
            throw GraphError("defect edge not in graph: " + std::to_string(a) + "-" +
                             std::to_string(b));
        deadE.insert({a, b});
    }
    Graph out;
    out.family = g.family;
    out.m = g.m;
    for (QubitId q : g.nodes)
        if (!dead.count(q)) out.nodes.push_back(q);
    for (const auto& e : g.edges) {
        if (dead.count(e.first) || dead.count(e.second) || deadE.count(e)) continue;
        out.edges.push_back(e);
    }
    out.defect_nodes = g.defect_nodes;
    out.defect_edges = g.defect_edges;
    out.defect_nodes.insert(out.defect_nodes.end(), dead.begin(), dead.end());
    out.defect_edges.insert(out.defect_edges.end(), deadE.begin(), deadE.end());
    std::sort(out.defect_nodes.begin(), out.defect_nodes.end());
    std::sort(out.defect_edges.begin(), out.defect_edges.end());
    return out;
}

}  // namespace cliquebed
