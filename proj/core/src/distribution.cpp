#include "decoupler/distribution.hpp"

#include <cmath>
#include <set>

#include "decoupler/error.hpp"
#include "json_util.hpp"

namespace decoupler {

std::string to_bitstring(std::uint64_t value, int n_bits) {
    std::string s(static_cast<std::size_t>(n_bits), '0');
    for (int i = 0; i < n_bits; ++i) {
        if ((value >> i) & 1U) s[static_cast<std::size_t>(n_bits - 1 - i)] = '1';
    }
    return s;
}

std::uint64_t bitstring_value(const std::string& bits) {
    std::uint64_t v = 0;
    for (char c : bits) v = (v << 1) | (c == '1' ? 1U : 0U);
    return v;
}

double OutcomeDistribution::probability(const std::string& bits) const {
    if (shots == 0) throw Error(Errc::ShotCountZero, "distribution has no shots");
    auto it = counts.find(bits);
    return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(shots);
}

ProbabilityMap OutcomeDistribution::probabilities() const {
    if (shots == 0) throw Error(Errc::ShotCountZero, "distribution has no shots");
    ProbabilityMap p;
    for (const auto& [k, c] : counts) p[k] = static_cast<double>(c) / static_cast<double>(shots);
    return p;
}

namespace {

std::string select_bits(const std::string& key, const std::vector<int>& bits) {
    const int n = static_cast<int>(key.size());
    const int m = static_cast<int>(bits.size());
    std::string out(static_cast<std::size_t>(m), '0');
    for (int j = 0; j < m; ++j) {
        const int b = bits[static_cast<std::size_t>(j)];
        if (b < 0 || b >= n) throw Error(Errc::InvalidArgument, "marginal bit out of range");
        out[static_cast<std::size_t>(m - 1 - j)] = key[static_cast<std::size_t>(n - 1 - b)];
    }
    return out;
}

}  // namespace

OutcomeDistribution OutcomeDistribution::marginal(const std::vector<int>& bits) const {
    OutcomeDistribution out;
    out.n_bits = static_cast<int>(bits.size());
    out.shots = shots;
    for (const auto& [k, c] : counts) out.counts[select_bits(k, bits)] += c;
    return out;
}

double OutcomeDistribution::prob_zero(int bit) const {
    if (shots == 0) throw Error(Errc::ShotCountZero, "distribution has no shots");
    std::uint64_t zeros = 0;
    for (const auto& [k, c] : counts) {
        if (select_bits(k, {bit})[0] == '0') zeros += c;
    }
    return static_cast<double>(zeros) / static_cast<double>(shots);
}

ProbabilityMap marginal(const ProbabilityMap& p, const std::vector<int>& bits) {
    ProbabilityMap out;
    for (const auto& [k, v] : p) out[select_bits(k, bits)] += v;
    return out;
}

double tv_distance(const ProbabilityMap& a, const ProbabilityMap& b) {
    std::set<std::string> keys;
    for (const auto& [k, v] : a) keys.insert(k);
    for (const auto& [k, v] : b) keys.insert(k);
    double s = 0.0;
    for (const auto& k : keys) {
        const auto ia = a.find(k);
        const auto ib = b.find(k);
        s += std::abs((ia == a.end() ? 0.0 : ia->second) - (ib == b.end() ? 0.0 : ib->second));
    }
    return 0.5 * s;
}

std::string distribution_to_json(const OutcomeDistribution& d, int indent) {
    detail::json j{{"counts", d.counts}, {"shots", d.shots}};
    return j.dump(indent) + "\n";
}

OutcomeDistribution distribution_from_json(const std::string& text) {
    const auto j = detail::parse_json(text);
    OutcomeDistribution d;
    d.counts = detail::field_as<std::map<std::string, std::uint64_t>>(j, "counts", "distribution");
    d.shots = detail::field_as<std::uint64_t>(j, "shots", "distribution");
    d.n_bits = d.counts.empty() ? 0 : static_cast<int>(d.counts.begin()->first.size());
    std::uint64_t total = 0;
    for (const auto& [k, c] : d.counts) {
        if (static_cast<int>(k.size()) != d.n_bits) throw Error(Errc::ParseError, "inconsistent bitstring widths");
        total += c;
    }
    if (total != d.shots) throw Error(Errc::ParseError, "counts do not sum to shots");
    return d;
}

}  // namespace decoupler
