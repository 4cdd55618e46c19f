#include "decoupler/device.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <tuple>

#include "decoupler/error.hpp"
#include "decoupler/rng.hpp"

namespace decoupler {

std::vector<std::string> validate(const DeviceModel& device) {
    std::vector<std::string> out;
    const auto n = static_cast<std::size_t>(device.n_qubits);
    if (device.n_qubits <= 0) out.push_back("n_qubits must be positive");
    if (device.omega01.size() != n) out.push_back("omega01 length must equal n_qubits");
    if (device.omega12.size() != n) out.push_back("omega12 length must equal n_qubits");
    for (double w : device.omega01) {
        if (!(w > 0)) out.push_back("omega01 entries must be positive");
    }
    for (double w : device.omega12) {
        if (!(w > 0)) out.push_back("omega12 entries must be positive");
    }
    std::set<std::pair<Qubit, Qubit>> seen;
    for (const auto& e : device.edges) {
        if (e.a < 0 || e.b < 0 || e.a >= device.n_qubits || e.b >= device.n_qubits) {
            out.push_back("edge endpoint out of range");
            continue;
        }
        if (e.a == e.b) out.push_back("self-loop on qubit " + std::to_string(e.a));
        if (!seen.insert(std::minmax(e.a, e.b)).second) {
            out.push_back("duplicate edge " + std::to_string(e.a) + "-" + std::to_string(e.b));
        }
    }
    const auto& t = device.timing;
    if (t.tau_m <= 0 || t.tau_ff <= 0) out.push_back("tau_m and tau_ff must be positive");
    for (const auto& [name, ns] : t.gate_ns) {
        if (ns < 0) out.push_back("negative duration for gate " + name);
    }
    const auto& nz = device.noise;
    auto check_prob = [&](double p, const char* what) {
        if (!(p >= 0.0 && p <= 1.0)) out.push_back(std::string(what) + " must lie in [0,1]");
    };
    auto check_rate = [&](double r, const char* what) {
        if (!(r >= 0.0)) out.push_back(std::string(what) + " must be non-negative");
    };
    for (double p : nz.readout_error) check_prob(p, "readout_error");
    check_prob(nz.pulse_error, "pulse_error");
    for (const auto& z : nz.zphase_rate) check_rate(z.rad_per_ns, "zphase_rate");
    for (double r : nz.zz_rate) check_rate(r, "zz_rate");
    for (double r : nz.t2_dephasing_rate) check_rate(r, "t2_dephasing_rate");
    if (!nz.zz_rate.empty() && nz.zz_rate.size() != device.edges.size()) {
        out.push_back("zz_rate length must equal the number of edges");
    }
    return out;
}

void normalize_noise(DeviceModel& device) {
    const auto n = static_cast<std::size_t>(device.n_qubits);
    auto& nz = device.noise;
    nz.zz_rate.resize(device.edges.size(), 0.0);
    nz.readout_error.resize(n, 0.0);
    if (!nz.t2_dephasing_rate.empty()) nz.t2_dephasing_rate.resize(n, 0.0);
    if (!nz.static_z_rate.empty()) nz.static_z_rate.resize(n, 0.0);
}

std::vector<std::vector<Qubit>> adjacency(const DeviceModel& device) {
    std::vector<std::vector<Qubit>> adj(static_cast<std::size_t>(device.n_qubits));
    for (const auto& e : device.edges) {
        adj[static_cast<std::size_t>(e.a)].push_back(e.b);
        adj[static_cast<std::size_t>(e.b)].push_back(e.a);
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    return adj;
}

namespace {

std::vector<int> bfs(const std::vector<std::vector<Qubit>>& adj, Qubit source) {
    std::vector<int> dist(adj.size(), kUnreachable);
    std::deque<Qubit> queue{source};
    dist[static_cast<std::size_t>(source)] = 0;
    while (!queue.empty()) {
        const Qubit q = queue.front();
        queue.pop_front();
        for (Qubit nb : adj[static_cast<std::size_t>(q)]) {
            auto& d = dist[static_cast<std::size_t>(nb)];
            if (d == kUnreachable) {
                d = dist[static_cast<std::size_t>(q)] + 1;
                queue.push_back(nb);
            }
        }
    }
    return dist;
}

void check_qubit(const DeviceModel& device, Qubit q) {
    if (q < 0 || q >= device.n_qubits) {
        throw Error(Errc::InvalidArgument, "qubit " + std::to_string(q) + " outside device");
    }
}

}  // namespace

int graph_distance(const DeviceModel& device, Qubit a, Qubit b) {
    check_qubit(device, a);
    check_qubit(device, b);
    return bfs(adjacency(device), a)[static_cast<std::size_t>(b)];
}

DistanceTable::DistanceTable(const DeviceModel& device) : n_(device.n_qubits) {
    const auto adj = adjacency(device);
    dist_.reserve(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_));
    for (Qubit q = 0; q < n_; ++q) {
        const auto row = bfs(adj, q);
        dist_.insert(dist_.end(), row.begin(), row.end());
    }
}

double zphase_rate(const DeviceModel& device, Qubit measured, Qubit unitary) {
    for (const auto& z : device.noise.zphase_rate) {
        if (z.measured == measured && z.unitary == unitary) return z.rad_per_ns;
    }
    return 0.0;
}

double readout_error(const DeviceModel& device, Qubit q) {
    const auto& ro = device.noise.readout_error;
    return static_cast<std::size_t>(q) < ro.size() ? ro[static_cast<std::size_t>(q)] : 0.0;
}

std::optional<std::size_t> edge_index(const DeviceModel& device, Qubit a, Qubit b) {
    for (std::size_t i = 0; i < device.edges.size(); ++i) {
        const auto& e = device.edges[i];
        if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return i;
    }
    return std::nullopt;
}

const char* to_string(CollisionKind kind) noexcept {
    return kind == CollisionKind::Type1 ? "Type1" : "Type3";
}

std::vector<CollisionFlag> detect_collisions(const DeviceModel& device, Qubit measured,
                                             const CollisionThresholds& th) {
    check_qubit(device, measured);
    const auto dist = bfs(adjacency(device), measured);
    std::vector<CollisionFlag> flags;
    const double shifted = device.omega01[static_cast<std::size_t>(measured)] + th.stark_shift_mhz;
    for (Qubit u = 0; u < device.n_qubits; ++u) {
        const int d = dist[static_cast<std::size_t>(u)];
        if (u == measured || d == kUnreachable || d > th.max_distance) continue;
        const double d1 = std::abs(shifted - device.omega01[static_cast<std::size_t>(u)]);
        const double d3 = std::abs(shifted - device.omega12[static_cast<std::size_t>(u)]);
        if (d1 <= th.type1_mhz) flags.push_back({measured, u, CollisionKind::Type1, d1, d3});
        if (d3 <= th.type3_mhz) flags.push_back({measured, u, CollisionKind::Type3, d1, d3});
    }
    return flags;
}

std::vector<CollisionFlag> detect_all_collisions(const DeviceModel& device, const CollisionThresholds& th) {
    std::vector<CollisionFlag> all;
    for (Qubit m = 0; m < device.n_qubits; ++m) {
        auto f = detect_collisions(device, m, th);
        all.insert(all.end(), f.begin(), f.end());
    }
    return all;
}

namespace {

std::vector<Edge> topology_edges(int n, Topology topology) {
    std::vector<Edge> edges;
    if (topology == Topology::Chain) {
        for (Qubit q = 0; q + 1 < n; ++q) edges.push_back({q, q + 1, 0.0});
        return edges;
    }

    // Heavy-hex lattice: rows of `width` qubits joined by bridge qubits on every
    // fourth column, offset by two on alternating rows; truncated by BFS from
    // the corner so the patch stays connected.
    const int width = 15;
    const int rows = n / width + 2;
    std::vector<std::pair<int, int>> big_edges;
    int count = 0;
    std::vector<std::vector<int>> row_ids(static_cast<std::size_t>(rows));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < width; ++c) row_ids[static_cast<std::size_t>(r)].push_back(count++);
        for (int c = 0; c + 1 < width; ++c) {
            big_edges.push_back({row_ids[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                                 row_ids[static_cast<std::size_t>(r)][static_cast<std::size_t>(c + 1)]});
        }
    }
    for (int r = 0; r + 1 < rows; ++r) {
        for (int c = (r % 2 == 0 ? 0 : 2); c < width; c += 4) {
            const int bridge = count++;
            big_edges.push_back({row_ids[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)], bridge});
            big_edges.push_back({bridge, row_ids[static_cast<std::size_t>(r + 1)][static_cast<std::size_t>(c)]});
        }
    }
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(count));
    for (auto [a, b] : big_edges) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());

    std::map<int, int> relabel;
    std::deque<int> queue{0};
    relabel[0] = 0;
    while (!queue.empty() && static_cast<int>(relabel.size()) < n) {
        const int q = queue.front();
        queue.pop_front();
        for (int nb : adj[static_cast<std::size_t>(q)]) {
            if (relabel.count(nb) || static_cast<int>(relabel.size()) >= n) continue;
            const int id = static_cast<int>(relabel.size());
            relabel[nb] = id;
            queue.push_back(nb);
        }
    }
    for (auto [a, b] : big_edges) {
        auto ia = relabel.find(a);
        auto ib = relabel.find(b);
        if (ia != relabel.end() && ib != relabel.end()) {
            edges.push_back({std::min(ia->second, ib->second), std::max(ia->second, ib->second), 0.0});
        }
    }
    std::sort(edges.begin(), edges.end(),
              [](const Edge& x, const Edge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
    return edges;
}

double log_uniform(Rng& rng, double lo, double hi) {
    return std::exp(std::log(lo) + rng.uniform() * (std::log(hi) - std::log(lo)));
}

double uniform(Rng& rng, double lo, double hi) { return lo + rng.uniform() * (hi - lo); }

bool pair_collides(double w01_m, double w01_u, double w12_u, const CollisionThresholds& th) {
    const double shifted = w01_m + th.stark_shift_mhz;
    return std::abs(shifted - w01_u) <= th.type1_mhz || std::abs(shifted - w12_u) <= th.type3_mhz;
}

}  // namespace

DeviceModel synthesize_device(int n, Topology topology, std::uint64_t seed, const SynthesisOptions& opt) {
    if (n < 2) throw Error(Errc::InvalidArgument, "synthesize_device requires at least 2 qubits");

    DeviceModel dev;
    dev.n_qubits = n;
    dev.edges = topology_edges(n, topology);
    const auto N = static_cast<std::size_t>(n);

    Rng coupling_rng = substream(seed, "device.coupling");
    for (auto& e : dev.edges) e.coupling_mhz = uniform(coupling_rng, opt.coupling_min_mhz, opt.coupling_max_mhz);

    const DistanceTable dist(dev);
    const auto& th = opt.thresholds;
    dev.omega01.assign(N, 0.0);
    dev.omega12.assign(N, 0.0);
    Rng freq_rng = substream(seed, "device.frequencies");
    for (Qubit q = 0; q < n; ++q) {
        const auto uq = static_cast<std::size_t>(q);
        for (int attempt = 0; attempt < 10000; ++attempt) {
            const double w01 = uniform(freq_rng, opt.omega01_min, opt.omega01_max);
            const double w12 = w01 + opt.anharmonicity_mhz + uniform(freq_rng, -10.0, 10.0);
            bool ok = true;
            for (Qubit p = 0; p < q && ok; ++p) {
                const auto up = static_cast<std::size_t>(p);
                if (dist(p, q) > th.max_distance) continue;
                ok = !pair_collides(dev.omega01[up], w01, w12, th) &&
                     !pair_collides(w01, dev.omega01[up], dev.omega12[up], th);
            }
            dev.omega01[uq] = w01;
            dev.omega12[uq] = w12;
            if (ok) break;
        }
    }

    Rng noise_rng = substream(seed, "device.noise");
    for (Qubit m = 0; m < n; ++m) {
        for (Qubit u = 0; u < n; ++u) {
            const int d = dist(m, u);
            if (u == m || d > opt.zphase_range) continue;
            dev.noise.zphase_rate.push_back({m, u, log_uniform(noise_rng, opt.zphase_min, opt.zphase_max)});
        }
    }
    for (std::size_t i = 0; i < dev.edges.size(); ++i) {
        dev.noise.zz_rate.push_back(log_uniform(noise_rng, opt.zz_min, opt.zz_max));
    }
    for (std::size_t q = 0; q < N; ++q) {
        dev.noise.readout_error.push_back(uniform(noise_rng, opt.readout_min, opt.readout_max));
    }

    Rng inject_rng = substream(seed, "device.inject");
    for (const auto& inj : opt.inject) {
        if (inj.measured < 0 || inj.measured >= n || inj.unitary < 0 || inj.unitary >= n ||
            inj.measured == inj.unitary) {
            throw Error(Errc::InvalidArgument, "injected collision references invalid qubits");
        }
        const auto um = static_cast<std::size_t>(inj.measured);
        const auto uu = static_cast<std::size_t>(inj.unitary);
        const double shifted = dev.omega01[um] + th.stark_shift_mhz;
        const double offset = uniform(inject_rng, -0.5, 0.5) * th.type1_mhz;
        if (inj.kind == CollisionKind::Type1) {
            const double anh = dev.omega12[uu] - dev.omega01[uu];
            dev.omega01[uu] = shifted + offset;
            dev.omega12[uu] = dev.omega01[uu] + anh;
        } else {
            dev.omega12[uu] = shifted + offset;
        }
        dev.noise.collision_pairs.push_back(
            {inj.measured, inj.unitary, uniform(inject_rng, 0.0, opt.collision_delta_max_mhz),
             uniform(inject_rng, opt.collision_j_min_mhz, opt.collision_j_max_mhz)});
    }
    return dev;
}

}  // namespace decoupler
