#include "decoupler/clifford.hpp"

#include <cmath>
#include <deque>
#include <numbers>

#include "decoupler/error.hpp"

namespace decoupler {

namespace {

Mat2 mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

}  // namespace

Mat2 gate_matrix(const Gate& g) {
    const cplx I{0.0, 1.0};
    switch (g.kind) {
        case GateKind::X: return {0.0, 1.0, 1.0, 0.0};
        case GateKind::Y: return {0.0, -I, I, 0.0};
        case GateKind::Z: return {1.0, 0.0, 0.0, -1.0};
        case GateKind::H: return gate_h();
        case GateKind::SX: return gate_sx();
        case GateKind::RZ: return {std::polar(1.0, -g.angle / 2), 0.0, 0.0, std::polar(1.0, g.angle / 2)};
        case GateKind::Rk: return {1.0, 0.0, 0.0, std::polar(1.0, 2.0 * std::numbers::pi / std::ldexp(1.0, g.k))};
        case GateKind::CX: break;
    }
    throw Error(Errc::InvalidArgument, "gate_matrix needs a single-qubit gate");
}

bool equal_up_to_phase(const Mat2& a, const Mat2& b, double tol) {
    // |tr(a^dagger b)| = 2 exactly when b = e^{i phi} a for unitaries.
    cplx tr = 0.0;
    for (int i = 0; i < 4; ++i) tr += std::conj(a[static_cast<std::size_t>(i)]) * b[static_cast<std::size_t>(i)];
    return std::abs(std::abs(tr) - 2.0) < tol;
}

const CliffordGroup& CliffordGroup::get() {
    static const CliffordGroup group;
    return group;
}

CliffordGroup::CliffordGroup() {
    const std::vector<Gate> generators = {make_rz(0, std::numbers::pi / 2), make_gate(GateKind::H, 0),
                                          make_gate(GateKind::SX, 0),       make_gate(GateKind::X, 0),
                                          make_gate(GateKind::Y, 0),        make_gate(GateKind::Z, 0)};
    matrices_.push_back({1.0, 0.0, 0.0, 1.0});
    words_.emplace_back();
    std::deque<int> frontier{0};
    while (!frontier.empty()) {
        const int cur = frontier.front();
        frontier.pop_front();
        for (const auto& g : generators) {
            const Mat2 next = mul(gate_matrix(g), matrices_[static_cast<std::size_t>(cur)]);
            if (find(next) >= 0) continue;
            matrices_.push_back(next);
            auto w = words_[static_cast<std::size_t>(cur)];
            w.push_back(g);
            words_.push_back(std::move(w));
            frontier.push_back(static_cast<int>(matrices_.size()) - 1);
        }
    }
    if (matrices_.size() != kSize) throw Error(Errc::InvalidArgument, "Clifford enumeration failed");

    table_.resize(kSize * kSize);
    inverse_.resize(kSize);
    for (int a = 0; a < kSize; ++a) {
        for (int b = 0; b < kSize; ++b) {
            const int c = find(mul(matrices_[static_cast<std::size_t>(b)], matrices_[static_cast<std::size_t>(a)]));
            table_[static_cast<std::size_t>(a * kSize + b)] = c;
            if (c == 0) inverse_[static_cast<std::size_t>(a)] = b;
        }
    }
}

int CliffordGroup::find(const Mat2& m) const {
    for (std::size_t i = 0; i < matrices_.size(); ++i) {
        if (equal_up_to_phase(matrices_[i], m)) return static_cast<int>(i);
    }
    return -1;
}

void CliffordGroup::append(DynamicCircuit& circuit, Qubit q, int index) const {
    for (Gate g : word(index)) {
        g.target = q;
        circuit.append(g);
    }
}

}  // namespace decoupler
