#include "decoupler/statevector.hpp"

#include <cmath>
#include <numbers>

#include "decoupler/error.hpp"

namespace decoupler {

StateVector::StateVector(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 0 || n_qubits > 30) throw Error(Errc::InvalidArgument, "statevector width out of range");
    amp_.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
    amp_[0] = 1.0;
}

void StateVector::apply_1q(int q, const Mat2& m) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        if (i & bit) continue;
        const cplx a0 = amp_[i];
        const cplx a1 = amp_[i | bit];
        amp_[i] = m[0] * a0 + m[1] * a1;
        amp_[i | bit] = m[2] * a0 + m[3] * a1;
    }
}

void StateVector::apply_x(int q) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        if (!(i & bit)) std::swap(amp_[i], amp_[i | bit]);
    }
}

void StateVector::apply_z(int q) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        if (i & bit) amp_[i] = -amp_[i];
    }
}

void StateVector::apply_y(int q) {
    const std::size_t bit = std::size_t{1} << q;
    const cplx I{0.0, 1.0};
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        if (i & bit) continue;
        const cplx a0 = amp_[i];
        const cplx a1 = amp_[i | bit];
        amp_[i] = -I * a1;
        amp_[i | bit] = I * a0;
    }
}

void StateVector::apply_rz(int q, double theta) {
    const std::size_t bit = std::size_t{1} << q;
    const cplx p0 = std::polar(1.0, -theta / 2);
    const cplx p1 = std::conj(p0);
    for (std::size_t i = 0; i < amp_.size(); ++i) amp_[i] *= (i & bit) ? p1 : p0;
}

void StateVector::apply_rzz(int a, int b, double phi) {
    const std::size_t ba = std::size_t{1} << a;
    const std::size_t bb = std::size_t{1} << b;
    const cplx even = std::polar(1.0, -phi / 2);
    const cplx odd = std::conj(even);
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        const bool parity = ((i & ba) != 0) != ((i & bb) != 0);
        amp_[i] *= parity ? odd : even;
    }
}

void StateVector::apply_cx(int control, int target) {
    const std::size_t bc = std::size_t{1} << control;
    const std::size_t bt = std::size_t{1} << target;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        if ((i & bc) && !(i & bt)) std::swap(amp_[i], amp_[i | bt]);
    }
}

void StateVector::apply_2q(int a, int b, const Mat4& m) {
    const std::size_t ba = std::size_t{1} << a;
    const std::size_t bb = std::size_t{1} << b;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        if ((i & ba) || (i & bb)) continue;
        const std::size_t idx[4] = {i, i | ba, i | bb, i | ba | bb};
        cplx in[4];
        for (int r = 0; r < 4; ++r) in[r] = amp_[idx[r]];
        for (int r = 0; r < 4; ++r) {
            cplx acc = 0.0;
            for (int c = 0; c < 4; ++c) acc += m[static_cast<std::size_t>(4 * r + c)] * in[c];
            amp_[idx[r]] = acc;
        }
    }
}

double StateVector::prob_one(int q) const {
    const std::size_t bit = std::size_t{1} << q;
    double p = 0.0;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        if (i & bit) p += std::norm(amp_[i]);
    }
    return p;
}

void StateVector::collapse(int q, int outcome) {
    const std::size_t bit = std::size_t{1} << q;
    double keep = 0.0;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        if (((i & bit) != 0) == (outcome != 0)) {
            keep += std::norm(amp_[i]);
        } else {
            amp_[i] = 0.0;
        }
    }
    if (keep <= 0.0) throw Error(Errc::InvalidArgument, "collapse onto zero-probability outcome");
    const double scale = 1.0 / std::sqrt(keep);
    for (auto& a : amp_) a *= scale;
}

double StateVector::norm() const {
    double s = 0.0;
    for (const auto& a : amp_) s += std::norm(a);
    return std::sqrt(s);
}

std::vector<double> StateVector::probabilities() const {
    std::vector<double> p(amp_.size());
    for (std::size_t i = 0; i < amp_.size(); ++i) p[i] = std::norm(amp_[i]);
    return p;
}

Mat2 gate_h() {
    const double r = std::numbers::sqrt2 / 2;
    return {r, r, r, -r};
}

Mat2 gate_sx() {
    const cplx a{0.5, 0.5};
    const cplx b{0.5, -0.5};
    return {a, b, b, a};
}

double fidelity(const StateVector& a, const StateVector& b) {
    cplx overlap = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) overlap += std::conj(a[i]) * b[i];
    return std::norm(overlap);
}

}  // namespace decoupler
