#include "cliquebed/sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "cliquebed/rng.hpp"

namespace cliquebed {

namespace {

double full_energy(const std::vector<double>& h,
                   const std::vector<std::tuple<int, int, double>>& couplers,
                   const std::vector<int>& z) {
    double e = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) e += h[i] * z[i];
    for (const auto& [a, b, w] : couplers) e += w * z[a] * z[b];
    return e;
}

}  // namespace

std::pair<double, std::vector<int>> brute_force_min(const IsingModel& m, int cap) {
    if (cap < 1 || cap > 62) throw GraphError("bad brute-force cap");
    if (m.n > cap)
        throw GraphError("brute force capped at n=" + std::to_string(cap));
    int n = m.n;
    std::vector<double> h(n, 0.0);
    for (const auto& [v, hv] : m.h) h[v] = hv;
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    std::vector<std::tuple<int, int, double>> couplers;
    for (const auto& [uv, j] : m.J) {
        adj[uv.first].push_back({uv.second, j});
        adj[uv.second].push_back({uv.first, j});
        couplers.push_back({uv.first, uv.second, j});
    }

    // Gray-code walk: one spin flips per step, energy kept incrementally
    // and re-anchored periodically against drift.
    std::vector<int> z(n, -1);
    double e = full_energy(h, couplers, z);
    double best = e;
    std::vector<int> bz = z;
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t c = 1; c < total; ++c) {
        int i = std::countr_zero(c);
        double f = h[i];
        for (const auto& [j, w] : adj[i]) f += w * z[j];
        e += -2.0 * z[i] * f;
        z[i] = -z[i];
        if ((c & 0xfffff) == 0) e = full_energy(h, couplers, z);
        if (e < best - 1e-12) {
            best = e;
            bz = z;
        } else if (std::abs(e - best) <= 1e-12 && z < bz) {
            bz = z;
        }
    }
    return {best, bz};
}

RawSamples sample(const EmbeddedIsing& e, int reads, int sweeps,
                  double beta_min, double beta_max, std::uint64_t seed,
                  int quench_sweeps) {
    if (reads < 1) throw GraphError("reads must be >= 1");
    if (sweeps < 1) throw GraphError("sweeps must be >= 1");
    if (!(beta_min > 0.0) || beta_min > beta_max)
        throw GraphError("need 0 < beta_min <= beta_max");
    if (quench_sweeps < 0) throw GraphError("quench_sweeps must be >= 0");

    RawSamples out;
    out.qubits = e.qubits();
    out.sweeps = sweeps;
    out.quench_sweeps = quench_sweeps;
    out.beta_min = beta_min;
    out.beta_max = beta_max;
    out.seed = seed;
    out.embedding_ref = e.embedding_ref;

    const int nq = static_cast<int>(out.qubits.size());
    std::map<QubitId, int> idx;
    for (int i = 0; i < nq; ++i) idx[out.qubits[i]] = i;
    std::vector<double> h(nq, 0.0);
    for (const auto& [q, v] : e.h) h[idx.at(q)] = v;
    std::vector<std::vector<std::pair<int, double>>> adj(nq);
    std::vector<std::tuple<int, int, double>> couplers;
    auto add = [&](QubitId a, QubitId b, double w) {
        int ia = idx.at(a), ib = idx.at(b);
        adj[ia].push_back({ib, w});
        adj[ib].push_back({ia, w});
        couplers.push_back({ia, ib, w});
    };
    for (const auto& [c, v] : e.J) add(c.first, c.second, v);
    const double cw = -e.chain_strength * e.scale_factor;
    for (const auto& c : e.chain_couplers) add(c.first, c.second, cw);

    std::vector<double> betas(sweeps);
    if (sweeps == 1) {
        betas[0] = beta_max;
    } else {
        double ratio = std::pow(beta_max / beta_min,
                                1.0 / static_cast<double>(sweeps - 1));
        double b = beta_min;
        for (int t = 0; t < sweeps; ++t, b *= ratio) betas[t] = b;
        betas[sweeps - 1] = beta_max;
    }

    std::vector<int> z(nq);
    for (int r = 0; r < reads; ++r) {
        auto rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
        for (int i = 0; i < nq; ++i) z[i] = uniform_below(rng, 2) == 0 ? -1 : 1;
        for (double beta : betas) {
            for (int i = 0; i < nq; ++i) {
                double f = h[i];
                for (const auto& [j, w] : adj[i]) f += w * z[j];
                double dE = -2.0 * z[i] * f;
                if (dE <= 0.0)
                    z[i] = -z[i];
                else if (uniform01(rng) < std::exp(-beta * dE))
                    z[i] = -z[i];
            }
        }
        for (int t = 0; t < quench_sweeps; ++t) {
            for (int i = 0; i < nq; ++i) {
                double f = h[i];
                for (const auto& [j, w] : adj[i]) f += w * z[j];
                if (-2.0 * z[i] * f < 0.0) z[i] = -z[i];
            }
        }
        std::vector<std::int8_t> state(nq);
        for (int i = 0; i < nq; ++i) state[i] = static_cast<std::int8_t>(z[i]);
        out.states.push_back(std::move(state));
        out.energies.push_back(full_energy(h, couplers, z));
    }
    return out;
}

std::string resolution_mode_name(ResolutionMode m) {
    return m == ResolutionMode::discard_zero ? "discard_zero" : "majority";
}

ResolutionMode resolution_mode_from(const std::string& name) {
    if (name == "discard_zero") return ResolutionMode::discard_zero;
    if (name == "majority") return ResolutionMode::majority;
    throw GraphError("unknown resolution mode: " + name);
}

SampleSet unembed(const RawSamples& raw, const PhysicalEmbedding& pe,
                  const IsingModel& m, ResolutionMode mode,
                  std::uint64_t seed) {
    if (static_cast<int>(pe.chains.size()) != m.n)
        throw GraphError("embedding chain count does not match the model");
    std::map<QubitId, int> idx;
    for (std::size_t i = 0; i < raw.qubits.size(); ++i) idx[raw.qubits[i]] = static_cast<int>(i);
    for (const auto& [v, chain] : pe.chains)
        for (auto q : chain)
            if (!idx.count(q))
                throw GraphError("samples do not cover qubit " + std::to_string(q));

    SampleSet out;
    out.qubits = raw.qubits;
    out.sweeps = raw.sweeps;
    out.quench_sweeps = raw.quench_sweeps;
    out.beta_min = raw.beta_min;
    out.beta_max = raw.beta_max;
    out.sample_seed = raw.seed;
    out.unembed_seed = seed;
    out.mode = mode;

    for (std::size_t r = 0; r < raw.states.size(); ++r) {
        const auto& state = raw.states[r];
        auto rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
        ReadRecord rec;
        rec.physical = state;
        rec.physical_energy = raw.energies[r];
        std::vector<int> z(m.n, 0);
        for (const auto& [v, chain] : pe.chains) {
            int sum = 0;
            bool agree = true;
            int first = state[idx.at(chain.front())];
            for (auto q : chain) {
                int s = state[idx.at(q)];
                sum += s;
                if (s != first) agree = false;
            }
            if (!agree) rec.broken = true;
            if (sum > 0)
                z[v] = 1;
            else if (sum < 0)
                z[v] = -1;
            else
                z[v] = uniform_below(rng, 2) == 0 ? -1 : 1;
        }
        if (mode == ResolutionMode::discard_zero && rec.broken) {
            rec.logical_energy = 0.0;
        } else {
            rec.logical = z;
            rec.logical_energy = energy(m, z);
        }
        out.reads.push_back(std::move(rec));
    }
    return out;
}

double break_rate(const SampleSet& s) {
    if (s.reads.empty()) return 0.0;
    std::size_t broken = 0;
    for (const auto& r : s.reads) broken += r.broken ? 1 : 0;
    return static_cast<double>(broken) / static_cast<double>(s.reads.size());
}

namespace {

const char kB64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string b64_encode(const std::vector<unsigned char>& bytes) {
    std::string out;
    std::size_t i = 0;
    for (; i + 3 <= bytes.size(); i += 3) {
        unsigned v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
        out += kB64[(v >> 18) & 63];
        out += kB64[(v >> 12) & 63];
        out += kB64[(v >> 6) & 63];
        out += kB64[v & 63];
    }
    if (i + 1 == bytes.size()) {
        unsigned v = bytes[i] << 16;
        out += kB64[(v >> 18) & 63];
        out += kB64[(v >> 12) & 63];
        out += "==";
    } else if (i + 2 == bytes.size()) {
        unsigned v = (bytes[i] << 16) | (bytes[i + 1] << 8);
        out += kB64[(v >> 18) & 63];
        out += kB64[(v >> 12) & 63];
        out += kB64[(v >> 6) & 63];
        out += '=';
    }
    return out;
}

std::vector<unsigned char> b64_decode(const std::string& s) {
    std::vector<int> rev(256, -1);
    for (int i = 0; i < 64; ++i) rev[static_cast<unsigned char>(kB64[i])] = i;
    std::vector<unsigned char> out;
    unsigned acc = 0;
    int bits = 0;
    for (char c : s) {
        if (c == '=') break;
        int v = rev[static_cast<unsigned char>(c)];
        if (v < 0) throw GraphError("bad base64 input");
        acc = (acc << 6) | static_cast<unsigned>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<unsigned char>((acc >> bits) & 0xff));
        }
    }
    return out;
}

}  // namespace

std::string pack_spins(const std::vector<int>& z) {
    std::vector<unsigned char> bytes((z.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < z.size(); ++i)
        if (z[i] > 0) bytes[i / 8] |= static_cast<unsigned char>(1u << (7 - i % 8));
    return b64_encode(bytes);
}

std::vector<int> unpack_spins(const std::string& b64, int n) {
    auto bytes = b64_decode(b64);
    if (bytes.size() < (static_cast<std::size_t>(n) + 7) / 8)
        throw GraphError("packed spins too short");
    std::vector<int> z(n);
    for (int i = 0; i < n; ++i)
        z[i] = (bytes[i / 8] >> (7 - i % 8)) & 1 ? 1 : -1;
    return z;
}

void save_samples_csv(const SampleSet& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw GraphError("cannot open for write: " + path);
    out << "read,broken,logical_energy,physical_energy,logical_spins\n";
    char buf[64];
    for (std::size_t r = 0; r < s.reads.size(); ++r) {
        const auto& rec = s.reads[r];
        out << r << ',' << (rec.broken ? 1 : 0) << ',';
        std::snprintf(buf, sizeof buf, "%.17g", rec.logical_energy);
        out << buf << ',';
        std::snprintf(buf, sizeof buf, "%.17g", rec.physical_energy);
        out << buf << ',';
        if (!rec.logical.empty()) out << pack_spins(rec.logical);
        out << '\n';
    }
}

SampleSet load_samples_csv(const std::string& path, int n_logical) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open: " + path);
    SampleSet s;
    std::string line;
    if (!std::getline(in, line) ||
        line != "read,broken,logical_energy,physical_energy,logical_spins")
        throw GraphError("bad samples CSV header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        ReadRecord rec;
        std::getline(ss, field, ',');  // read index, implicit by position
        std::getline(ss, field, ',');
        rec.broken = field == "1";
        std::getline(ss, field, ',');
        rec.logical_energy = std::stod(field);
        std::getline(ss, field, ',');
        rec.physical_energy = std::stod(field);
        std::getline(ss, field, ',');
        if (!field.empty()) rec.logical = unpack_spins(field, n_logical);
        s.reads.push_back(std::move(rec));
    }
    return s;
}

}  // namespace cliquebed
