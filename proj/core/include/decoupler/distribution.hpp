#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace decoupler {

/// Bitstrings list clbit n-1 first, so reading one as a binary number gives
/// sum_i c_i 2^i.
std::string to_bitstring(std::uint64_t value, int n_bits);
std::uint64_t bitstring_value(const std::string& bits);

using ProbabilityMap = std::map<std::string, double>;

struct OutcomeDistribution {
    int n_bits = 0;
    std::uint64_t shots = 0;
    std::map<std::string, std::uint64_t> counts;

    double probability(const std::string& bits) const;
    double probability(std::uint64_t value) const { return probability(to_bitstring(value, n_bits)); }
    ProbabilityMap probabilities() const;
    /// Distribution over the listed clbits; bits[0] becomes the least
    /// significant position of the new strings.
    OutcomeDistribution marginal(const std::vector<int>& bits) const;
    /// Probability that clbit `bit` reads 0.
    double prob_zero(int bit) const;

    bool operator==(const OutcomeDistribution&) const = default;
};

ProbabilityMap marginal(const ProbabilityMap& p, const std::vector<int>& bits);

/// Total-variation distance between two probability maps.
double tv_distance(const ProbabilityMap& a, const ProbabilityMap& b);

/// {"counts": {"0101": 12, ...}, "shots": n}
std::string distribution_to_json(const OutcomeDistribution& d, int indent = 2);
OutcomeDistribution distribution_from_json(const std::string& text);

}  // namespace decoupler
