#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace decoupler {

using cplx = std::complex<double>;
using Mat2 = std::array<cplx, 4>;   // row-major
using Mat4 = std::array<cplx, 16>;  // row-major, basis index = b_first + 2*b_second

/// Dense n-qubit state. Qubit q is bit q of the amplitude index.
class StateVector {
public:
    StateVector() = default;
    explicit StateVector(int n_qubits);

    int n_qubits() const noexcept { return n_; }
    std::size_t size() const noexcept { return amp_.size(); }
    const std::vector<cplx>& amplitudes() const noexcept { return amp_; }
    std::vector<cplx>& amplitudes() noexcept { return amp_; }
    cplx operator[](std::size_t i) const noexcept { return amp_[i]; }

    void apply_1q(int q, const Mat2& m);
    void apply_x(int q);
    void apply_z(int q);
    void apply_y(int q);
    /// exp(-i theta/2 Z_q).
    void apply_rz(int q, double theta);
    /// exp(-i phi/2 Z_a Z_b).
    void apply_rzz(int a, int b, double phi);
    void apply_cx(int control, int target);
    void apply_2q(int a, int b, const Mat4& m);

    double prob_one(int q) const;
    /// Projects qubit q onto `outcome` and renormalizes.
    void collapse(int q, int outcome);
    double norm() const;

    /// Probability of each basis index.
    std::vector<double> probabilities() const;

private:
    int n_ = 0;
    std::vector<cplx> amp_;
};

Mat2 gate_h();
Mat2 gate_sx();
double fidelity(const StateVector& a, const StateVector& b);

}  // namespace decoupler
