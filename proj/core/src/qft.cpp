#include "decoupler/qft.hpp"

#include <cmath>
#include <numbers>

#include "decoupler/error.hpp"
#include "decoupler/rng.hpp"
#include "decoupler/simulator.hpp"

namespace decoupler {

void append_qft_m(DynamicCircuit& c, const std::vector<Qubit>& qubits, const std::vector<Clbit>& clbits) {
    if (qubits.size() != clbits.size()) throw Error(Errc::InvalidArgument, "QFT+M needs one clbit per qubit");
    for (std::size_t m = 0; m < qubits.size(); ++m) {
        c.h(qubits[m]);
        c.measure(qubits[m], clbits[m]);
        for (std::size_t j = m + 1; j < qubits.size(); ++j) {
            c.c_if(make_rk(qubits[j], static_cast<int>(j - m + 1)), clbits[m]);
        }
    }
}

namespace {

std::vector<int> iota(int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
    return v;
}

}  // namespace

DynamicCircuit build_qft_m(int n) {
    if (n < 1) throw Error(Errc::InvalidArgument, "QFT+M needs n >= 1");
    DynamicCircuit c(n, n);
    append_qft_m(c, iota(n), iota(n));
    return c;
}

void append_qft_dagger_basis(DynamicCircuit& c, const std::vector<Qubit>& qubits, std::uint64_t s) {
    const auto n = qubits.size();
    if (n < 64 && s >= (std::uint64_t{1} << n)) throw Error(Errc::InvalidArgument, "s out of range");
    for (std::size_t j = 0; j < n; ++j) {
        c.h(qubits[j]);
        // Only the low j+1 bits of s matter for the phase modulo 2 pi.
        const std::uint64_t low = s & ((std::uint64_t{2} << j) - 1);
        const double phase = -2.0 * std::numbers::pi * static_cast<double>(low) / std::ldexp(1.0, static_cast<int>(j) + 1);
        if (low != 0) c.rz(qubits[j], phase);
    }
}

DynamicCircuit prepare_qft_dagger_basis(int n, std::uint64_t s) {
    DynamicCircuit c(n, 0);
    append_qft_dagger_basis(c, iota(n), s);
    return c;
}

Qubit ghz_flip_qubit(const GhzSpec& spec) { return spec.n - 1 - spec.m; }

DynamicCircuit build_ghz_psi_m(const GhzSpec& spec) {
    if (spec.n < 1 || spec.m < 0 || spec.m >= spec.n) throw Error(Errc::InvalidArgument, "GHZ spec needs 0 <= m < n");
    DynamicCircuit c(spec.n, 0);
    c.h(0);
    for (Qubit q = 0; q + 1 < spec.n; ++q) c.cx(q, q + 1);
    for (Qubit q = 0; q < spec.n; ++q) c.h(q);
    c.rz(ghz_flip_qubit(spec), std::numbers::pi);
    return c;
}

double peak_amplitude_closed_form(int m) {
    if (m < 0) throw Error(Errc::InvalidArgument, "m must be non-negative");
    const double s = std::sin(std::numbers::pi / std::ldexp(1.0, m + 1));
    return 1.0 / (std::ldexp(1.0, 2 * m + 1) * s * s);
}

SnrReport compute_snr(const ProbabilityMap& p, int n, int m) {
    if (m < 0 || m >= n) throw Error(Errc::InvalidArgument, "SNR needs 0 <= m < n");
    const std::uint64_t size = std::uint64_t{1} << n;
    const std::uint64_t peak = std::uint64_t{1} << (n - 1 - m);
    const std::uint64_t mirror = size - peak;
    auto prob = [&](std::uint64_t v) {
        const auto it = p.find(to_bitstring(v, n));
        return it == p.end() ? 0.0 : it->second;
    };
    SnrReport r;
    r.m = m;
    r.p_peak = prob(peak);
    r.p_mirror = prob(mirror);
    double total = 0.0;
    double sq = 0.0;
    for (const auto& [k, v] : p) {
        total += v;
        sq += v * v;
    }
    const double mean = total / static_cast<double>(size);
    const double var = std::max(0.0, sq / static_cast<double>(size) - mean * mean);
    r.noise = std::sqrt(var);
    if (r.noise <= 1e-15 * std::max(mean, 1e-300)) {
        r.zero_variance = true;
        r.snr = 0.0;
    } else {
        r.snr = (r.p_peak + r.p_mirror) / (2.0 * r.noise);
    }
    return r;
}

SnrReport compute_snr(const OutcomeDistribution& d, int n, int m) { return compute_snr(d.probabilities(), n, m); }

DynamicCircuit build_proc_fidelity_circuit(int n, std::uint64_t s) {
    DynamicCircuit c(n, n);
    append_qft_dagger_basis(c, iota(n), s);
    c.barrier(iota(n));
    append_qft_m(c, iota(n), iota(n));
    return c;
}

ProcFidelityReport compute_proc_fidelity(int n, int n_samples, const DdMode& mode, const DeviceModel& device,
                                         std::uint64_t seed, const QftExperimentOptions& options) {
    if (n < 1 || n > 24) throw Error(Errc::InvalidArgument, "F_proc needs 1 <= n <= 24");
    if (n_samples < 1) throw Error(Errc::InvalidArgument, "need at least one sample");
    ProcFidelityReport r;
    r.n = n;
    r.shots = options.shots;
    Rng pick = substream(seed, "qft.fidelity.s", {static_cast<std::uint64_t>(n)});
    SimOptions sim;
    sim.threads = options.threads;
    sim.noiseless = options.noiseless;
    double var_sum = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const std::uint64_t s = pick.below(std::uint64_t{1} << n);
        const auto sched = build_schedule(build_proc_fidelity_circuit(n, s), device.timing);
        const auto pulses = options.noiseless ? std::vector<PulseEvent>{} : dd_pulses(sched, device, mode);
        const auto dist = run_shots(sched, pulses, device, options.shots,
                                    derive_seed(seed, "qft.fidelity.shots", {static_cast<std::uint64_t>(n), s,
                                                                              static_cast<std::uint64_t>(i)}),
                                    sim);
        const double p = dist.probability(s);
        r.s_values.push_back(s);
        r.p_s.push_back(p);
        var_sum += p * (1.0 - p) / static_cast<double>(options.shots);
    }
    double sum = 0.0;
    for (double p : r.p_s) sum += p;
    r.f_proc = sum / n_samples;
    r.stderr_shots = std::sqrt(var_sum) / n_samples;
    return r;
}

DynamicCircuit build_ghz_qft_circuit(const GhzSpec& spec) {
    DynamicCircuit c = build_ghz_psi_m(spec);
    c.n_clbits = spec.n;
    c.barrier(iota(spec.n));
    append_qft_m(c, iota(spec.n), iota(spec.n));
    return c;
}

OutcomeDistribution run_ghz_qft(const GhzSpec& spec, const DdMode& mode, const DeviceModel& device, std::uint64_t seed,
                                const QftExperimentOptions& options) {
    const auto sched = build_schedule(build_ghz_qft_circuit(spec), device.timing);
    const auto pulses = options.noiseless ? std::vector<PulseEvent>{} : dd_pulses(sched, device, mode);
    SimOptions sim;
    sim.threads = options.threads;
    sim.noiseless = options.noiseless;
    return run_shots(sched, pulses, device, options.shots,
                     derive_seed(seed, "qft.ghz.shots", {static_cast<std::uint64_t>(spec.n), static_cast<std::uint64_t>(spec.m)}),
                     sim);
}

std::vector<std::complex<double>> dense_qft_output(const std::vector<std::complex<double>>& psi, int n) {
    const std::size_t N = std::size_t{1} << n;
    if (psi.size() != N) throw Error(Errc::InvalidArgument, "state size mismatch");
    auto reverse = [n](std::size_t v) {
        std::size_t r = 0;
        for (int b = 0; b < n; ++b) {
            if ((v >> b) & 1U) r |= std::size_t{1} << (n - 1 - b);
        }
        return r;
    };
    std::vector<std::complex<double>> out(N);
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    for (std::size_t y = 0; y < N; ++y) {
        std::complex<double> acc = 0.0;
        for (std::size_t x = 0; x < N; ++x) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>((x * y) % N) / static_cast<double>(N);
            acc += std::polar(1.0, angle) * psi[reverse(x)];
        }
        out[y] = acc * scale;
    }
    return out;
}

}  // namespace decoupler
