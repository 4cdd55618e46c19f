#pragma once

#include <vector>

#include "decoupler/circuit.hpp"
#include "decoupler/rng.hpp"
#include "decoupler/statevector.hpp"

namespace decoupler {

/// Unitary of a single-qubit gate (CX is rejected).
Mat2 gate_matrix(const Gate& gate);

/// The 24 single-qubit Cliffords, enumerated breadth-first from the identity
/// over {RZ(pi/2), H, SX, X, Y, Z}, so each element carries a shortest word.
/// Element 0 is the identity.
class CliffordGroup {
public:
    static const CliffordGroup& get();

    static constexpr int kSize = 24;

    const Mat2& matrix(int index) const { return matrices_.at(static_cast<std::size_t>(index)); }
    /// Gate word with target 0; the first gate acts first.
    const std::vector<Gate>& word(int index) const { return words_.at(static_cast<std::size_t>(index)); }

    /// Index of `second` applied after `first`.
    int compose(int first, int second) const { return table_[static_cast<std::size_t>(first * kSize + second)]; }
    int inverse(int index) const { return inverse_.at(static_cast<std::size_t>(index)); }
    /// Index of the element equal to `m` up to global phase, -1 if none.
    int find(const Mat2& m) const;

    int uniform(Rng& rng) const { return static_cast<int>(rng.below(kSize)); }

    void append(DynamicCircuit& circuit, Qubit q, int index) const;

private:
    CliffordGroup();

    std::vector<Mat2> matrices_;
    std::vector<std::vector<Gate>> words_;
    std::vector<int> table_;
    std::vector<int> inverse_;
};

/// True when a and b agree up to a global phase.
bool equal_up_to_phase(const Mat2& a, const Mat2& b, double tol = 1e-9);

}  // namespace decoupler
