#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "decoupler/circuit.hpp"
#include "decoupler/dd.hpp"
#include "decoupler/device.hpp"
#include "decoupler/distribution.hpp"

namespace decoupler {

/// Semiclassical QFT on `qubits`: for each position m, H, measure into
/// clbits[m], then conditional Rk(k = m' - m + 1) on every later qubit m'.
/// The recorded value sum_m c_m 2^m equals the output index of the dense QFT
/// with qubits[0] as the most significant input bit.
void append_qft_m(DynamicCircuit& circuit, const std::vector<Qubit>& qubits, const std::vector<Clbit>& clbits);
DynamicCircuit build_qft_m(int n);

/// Product state QFT^dagger |s>: qubit j gets H then RZ(-2 pi s / 2^(j+1)).
void append_qft_dagger_basis(DynamicCircuit& circuit, const std::vector<Qubit>& qubits, std::uint64_t s);
DynamicCircuit prepare_qft_dagger_basis(int n, std::uint64_t s);

struct GhzSpec {
    int n = 10;
    int m = 0;
};

/// X-basis GHZ state with an RZ(pi) phase flip: H(q0), CX fan-out chain,
/// H on every qubit, RZ(pi) on the qubit of input place value 2^m, i.e.
/// qubit n-1-m (qubit 0 carries the most significant bit).
DynamicCircuit build_ghz_psi_m(const GhzSpec& spec);
Qubit ghz_flip_qubit(const GhzSpec& spec);

/// (1 / 2^(2m+1)) csc^2(pi / 2^(m+1)).
double peak_amplitude_closed_form(int m);

struct SnrReport {
    int m = 0;
    double p_peak = 0.0;
    double p_mirror = 0.0;
    double noise = 0.0;
    double snr = 0.0;
    /// Flat distribution: SNR undefined and reported as 0.
    bool zero_variance = false;
};

/// Peak 2^(n-1-m), mirror 2^n - 2^(n-1-m); noise is the population standard
/// deviation over all 2^n outcomes.
SnrReport compute_snr(const ProbabilityMap& p, int n, int m);
SnrReport compute_snr(const OutcomeDistribution& d, int n, int m);

struct ProcFidelityReport {
    int n = 0;
    std::vector<std::uint64_t> s_values;
    std::vector<double> p_s;
    std::uint64_t shots = 0;
    double f_proc = 0.0;
    /// Standard error of the mean over samples from shot noise only.
    double stderr_shots = 0.0;
};

struct QftExperimentOptions {
    std::uint64_t shots = 10000;
    int threads = 1;
    bool noiseless = false;
};

/// QFT^dagger|s> preparation, barrier, QFT+M on qubits 0..n-1.
DynamicCircuit build_proc_fidelity_circuit(int n, std::uint64_t s);

/// Samples n_samples values of s uniformly and averages p_hat(s).
ProcFidelityReport compute_proc_fidelity(int n, int n_samples, const DdMode& mode, const DeviceModel& device,
                                         std::uint64_t seed, const QftExperimentOptions& options = {});

/// Psi_m preparation, barrier, QFT+M.
DynamicCircuit build_ghz_qft_circuit(const GhzSpec& spec);

/// QFT+M output distribution of Psi_m under the mode.
OutcomeDistribution run_ghz_qft(const GhzSpec& spec, const DdMode& mode, const DeviceModel& device, std::uint64_t seed,
                                const QftExperimentOptions& options = {});

/// Dense QFT with qubit 0 as the most significant bit: returns QFT|psi>,
/// where psi is indexed by the simulator convention (qubit q = bit q).
std::vector<std::complex<double>> dense_qft_output(const std::vector<std::complex<double>>& psi, int n);

}  // namespace decoupler
