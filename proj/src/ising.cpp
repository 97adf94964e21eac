#include "cliquebed/ising.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include <json.hpp>

#include "cliquebed/rng.hpp"

namespace cliquebed {

IsingModel random_sk(int n, std::uint64_t seed) {
    if (n < 1) throw GraphError("random_sk needs n >= 1");
    IsingModel m;
    m.n = n;
    m.seed = seed;
    auto rng = make_rng(seed);
    auto coin = [&]() { return uniform_below(rng, 2) == 0 ? -1.0 : 1.0; };
    for (int v = 0; v < n; ++v) m.h[v] = coin();
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) m.J[{u, v}] = coin();
    return m;
}

double energy(const IsingModel& m, const std::vector<int>& z) {
    if (static_cast<int>(z.size()) != m.n)
        throw GraphError("spin vector length does not match variable count");
    for (int s : z)
        if (s != 1 && s != -1) throw GraphError("spins must be +1 or -1");
    double e = 0.0;
    for (const auto& [v, hv] : m.h) e += hv * z[v];
    for (const auto& [uv, j] : m.J) e += j * z[uv.first] * z[uv.second];
    return e;
}

std::vector<QubitId> EmbeddedIsing::qubits() const {
    std::set<QubitId> q;
    for (const auto& [x, v] : h) q.insert(x);
    for (const auto& [e, v] : J) {
        q.insert(e.first);
        q.insert(e.second);
    }
    for (const auto& e : chain_couplers) {
        q.insert(e.first);
        q.insert(e.second);
    }
    return {q.begin(), q.end()};
}

std::uint64_t physical_hash(const PhysicalEmbedding& pe) {
    const std::uint64_t prime = 0x100000001b3ULL;
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= prime;
        }
    };
    feed(pe.kind == ChainKind::four_clique ? 4 : 1);
    feed(pe.target_hash);
    feed(pe.chains.size());
    for (const auto& [v, chain] : pe.chains) {
        feed(static_cast<std::uint64_t>(v));
        feed(chain.size());
        for (auto q : chain) feed(q);
    }
    return h;
}

EmbeddedIsing embed_parameters(const IsingModel& m, const PhysicalEmbedding& pe,
                               double chain_strength) {
    if (chain_strength <= 0) throw GraphError("chain_strength must be positive");
    if (static_cast<int>(pe.chains.size()) != m.n)
        throw GraphError("embedding has " + std::to_string(pe.chains.size()) +
                         " chains for " + std::to_string(m.n) + " variables");
    for (int v = 0; v < m.n; ++v)
        if (!pe.chains.count(v))
            throw GraphError("missing chain for variable " + std::to_string(v));

    EmbeddedIsing e;
    e.chain_strength = chain_strength;
    e.scale_factor = 1.0;
    e.embedding_ref = physical_hash(pe);

    for (const auto& [v, hv] : m.h) {
        const auto& chain = pe.chains.at(v);
        if (chain.empty()) throw GraphError("empty chain");
        double split = hv / static_cast<double>(chain.size());
        for (auto q : chain) e.h[q] += split;
    }
    for (const auto& [uv, j] : m.J) {
        if (j == 0.0) continue;
        auto it = pe.logical_edge_couplers.find(uv);
        if (it == pe.logical_edge_couplers.end() || it->second.empty())
            throw GraphError("no couplers for logical edge (" +
                             std::to_string(uv.first) + "," +
                             std::to_string(uv.second) + ")");
        double split = j / static_cast<double>(it->second.size());
        for (const auto& c : it->second) e.J[c] += split;
    }
    std::set<QubitEdge> chain_set;
    for (const auto& [v, edges] : pe.intra_couplers)
        chain_set.insert(edges.begin(), edges.end());
    e.chain_couplers.assign(chain_set.begin(), chain_set.end());
    for (const auto& c : e.chain_couplers)
        if (e.J.count(c))
            throw GraphError("coupler assigned both problem and chain weight");
    return e;
}

EmbeddedIsing autoscale(EmbeddedIsing e, double h_range, double j_range) {
    if (h_range <= 0 || j_range <= 0) throw GraphError("ranges must be positive");
    double maxh = 0.0, maxj = 0.0;
    for (const auto& [q, v] : e.h) maxh = std::max(maxh, std::abs(v));
    for (const auto& [c, v] : e.J) maxj = std::max(maxj, std::abs(v));
    if (!e.chain_couplers.empty())
        maxj = std::max(maxj, e.chain_strength * e.scale_factor);
    double s = std::numeric_limits<double>::infinity();
    if (maxh > 0) s = std::min(s, h_range / maxh);
    if (maxj > 0) s = std::min(s, j_range / maxj);
    if (!std::isfinite(s)) s = 1.0;
    for (auto& [q, v] : e.h) v *= s;
    for (auto& [c, v] : e.J) v *= s;
    e.scale_factor *= s;
    return e;
}

double physical_energy(const EmbeddedIsing& e, const std::map<QubitId, int>& x) {
    auto spin = [&](QubitId q) {
        auto it = x.find(q);
        if (it == x.end())
            throw GraphError("no spin for qubit " + std::to_string(q));
        if (it->second != 1 && it->second != -1)
            throw GraphError("spins must be +1 or -1");
        return static_cast<double>(it->second);
    };
    double en = 0.0;
    for (const auto& [q, v] : e.h) en += v * spin(q);
    for (const auto& [c, v] : e.J) en += v * spin(c.first) * spin(c.second);
    double cw = -e.chain_strength * e.scale_factor;
    for (const auto& c : e.chain_couplers)
        en += cw * spin(c.first) * spin(c.second);
    return en;
}

void save_instance(const IsingModel& m, const std::string& path) {
    nlohmann::ordered_json j;
    j["n"] = m.n;
    std::vector<double> h(m.n, 0.0);
    for (const auto& [v, hv] : m.h) h[v] = hv;
    j["h"] = h;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [uv, jv] : m.J) arr.push_back({uv.first, uv.second, jv});
    j["j"] = std::move(arr);
    j["seed"] = m.seed;
    std::ofstream out(path);
    if (!out) throw GraphError("cannot open for write: " + path);
    out << j.dump(1) << "\n";
}

IsingModel load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open: " + path);
    nlohmann::json j;
    in >> j;
    IsingModel m;
    m.n = j.at("n").get<int>();
    if (m.n < 1) throw GraphError("bad variable count");
    const auto& h = j.at("h");
    if (static_cast<int>(h.size()) != m.n) throw GraphError("h length mismatch");
    for (int v = 0; v < m.n; ++v) m.h[v] = h[v].get<double>();
    for (const auto& row : j.at("j")) {
        int u = row.at(0).get<int>(), v = row.at(1).get<int>();
        if (u == v || u < 0 || v < 0 || u >= m.n || v >= m.n)
            throw GraphError("bad J key");
        if (u > v) std::swap(u, v);
        if (!m.J.emplace(std::pair{u, v}, row.at(2).get<double>()).second)
            throw GraphError("duplicate J key");
    }
    if (j.contains("seed")) m.seed = j["seed"].get<std::uint64_t>();
    return m;
}

void save_embedded(const EmbeddedIsing& e, const std::string& path) {
    nlohmann::ordered_json j;
    auto harr = nlohmann::ordered_json::array();
    for (const auto& [q, v] : e.h) harr.push_back({q, v});
    j["h"] = std::move(harr);
    auto jarr = nlohmann::ordered_json::array();
    for (const auto& [c, v] : e.J) jarr.push_back({c.first, c.second, v});
    j["j"] = std::move(jarr);
    auto carr = nlohmann::ordered_json::array();
    for (const auto& c : e.chain_couplers) carr.push_back({c.first, c.second});
    j["chain_couplers"] = std::move(carr);
    j["chain_strength"] = e.chain_strength;
    j["scale_factor"] = e.scale_factor;
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(e.embedding_ref));
    j["embedding_ref"] = hex;
    std::ofstream out(path);
    if (!out) throw GraphError("cannot open for write: " + path);
    out << j.dump(1) << "\n";
}

EmbeddedIsing load_embedded(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open: " + path);
    nlohmann::json j;
    in >> j;
    EmbeddedIsing e;
    for (const auto& row : j.at("h"))
        e.h[row.at(0).get<QubitId>()] = row.at(1).get<double>();
    for (const auto& row : j.at("j")) {
        QubitId a = row.at(0).get<QubitId>(), b = row.at(1).get<QubitId>();
        if (a > b) std::swap(a, b);
        e.J[{a, b}] = row.at(2).get<double>();
    }
    for (const auto& row : j.at("chain_couplers")) {
        QubitId a = row.at(0).get<QubitId>(), b = row.at(1).get<QubitId>();
        if (a > b) std::swap(a, b);
        e.chain_couplers.push_back({a, b});
    }
    std::sort(e.chain_couplers.begin(), e.chain_couplers.end());
    e.chain_strength = j.at("chain_strength").get<double>();
    e.scale_factor = j.at("scale_factor").get<double>();
    e.embedding_ref =
        std::stoull(j.at("embedding_ref").get<std::string>(), nullptr, 16);
    return e;
}

}  // namespace cliquebed
