#include <gtest/gtest.h>

#include "decoupler/device.hpp"

using namespace decoupler;

namespace {

DeviceModel chain(int n, std::vector<double> w01, std::vector<double> w12) {
    DeviceModel d;
    d.n_qubits = n;
    for (int q = 0; q + 1 < n; ++q) d.edges.push_back({q, q + 1, 2.0});
    d.omega01 = std::move(w01);
    d.omega12 = std::move(w12);
    return d;
}

}  // namespace

TEST(Graph, Distances) {
    auto d = chain(4, {5000, 5000, 5000, 5000}, {4700, 4700, 4700, 4700});
    EXPECT_EQ(graph_distance(d, 0, 3), 3);
    EXPECT_EQ(graph_distance(d, 2, 2), 0);
    d.edges.erase(d.edges.begin() + 1);
    EXPECT_EQ(graph_distance(d, 0, 3), kUnreachable);
    const DistanceTable t(d);
    EXPECT_EQ(t(2, 3), 1);
    EXPECT_EQ(t(0, 2), kUnreachable);
}

TEST(Collisions, Type1Arithmetic) {
    const auto d = chain(2, {5000, 4985}, {4670, 4655});
    const auto f = detect_collisions(d, 0);
    ASSERT_EQ(f.size(), 1u);
    EXPECT_EQ(f[0].kind, CollisionKind::Type1);
    EXPECT_EQ(f[0].unitary, 1);
    EXPECT_DOUBLE_EQ(f[0].delta1, 10.0);
}

TEST(Collisions, FarFrequenciesNoFlags) {
    const auto d = chain(2, {5000, 4900}, {4670, 4850});
    EXPECT_TRUE(detect_collisions(d, 0).empty());
}

TEST(Collisions, OutsideRange) {
    auto d = chain(6, {5000, 4800, 4800, 4800, 4800, 4975}, {4670, 4470, 4470, 4470, 4470, 4645});
    EXPECT_EQ(graph_distance(d, 0, 5), 5);
    for (const auto& f : detect_collisions(d, 0)) EXPECT_NE(f.unitary, 5);
}

TEST(Collisions, DependsOnMeasuredRole) {
    const auto d = chain(2, {5000, 4985}, {4670, 4655});
    EXPECT_FALSE(detect_collisions(d, 0).empty());
    EXPECT_TRUE(detect_collisions(d, 1).empty());
}

TEST(Collisions, MonotoneInThresholds) {
    const auto d = synthesize_device(12, Topology::Chain, 3);
    CollisionThresholds lo;
    lo.type1_mhz = 40;
    lo.type3_mhz = 60;
    CollisionThresholds hi = lo;
    hi.type1_mhz = 80;
    hi.type3_mhz = 120;
    const auto a = detect_all_collisions(d, lo);
    const auto b = detect_all_collisions(d, hi);
    for (const auto& f : a) {
        const bool kept = std::any_of(b.begin(), b.end(), [&](const CollisionFlag& g) {
            return g.measured == f.measured && g.unitary == f.unitary && g.kind == f.kind;
        });
        EXPECT_TRUE(kept);
    }
    EXPECT_GE(b.size(), a.size());
}

TEST(Synthesis, DeterministicAndCollisionFree) {
    const auto a = synthesize_device(30, Topology::Chain, 7);
    const auto b = synthesize_device(30, Topology::Chain, 7);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.edges.size(), 29u);
    EXPECT_TRUE(validate(a).empty());
    EXPECT_TRUE(detect_all_collisions(a).empty());
    EXPECT_NE(a, synthesize_device(30, Topology::Chain, 8));
}

TEST(Synthesis, InjectedCollision) {
    SynthesisOptions opt;
    opt.inject.push_back({2, 3, CollisionKind::Type1});
    const auto d = synthesize_device(8, Topology::Chain, 11, opt);
    const auto f = detect_collisions(d, 2);
    EXPECT_TRUE(std::any_of(f.begin(), f.end(), [](const CollisionFlag& g) {
        return g.unitary == 3 && g.kind == CollisionKind::Type1;
    }));
    ASSERT_EQ(d.noise.collision_pairs.size(), 1u);
    EXPECT_GE(d.noise.collision_pairs[0].j_eff_mhz, 1.0);
    EXPECT_LE(d.noise.collision_pairs[0].j_eff_mhz, 5.0);
}

TEST(Synthesis, HeavyHexConnected) {
    const auto d = synthesize_device(27, Topology::HeavyHexPatch, 1);
    EXPECT_EQ(d.n_qubits, 27);
    const DistanceTable t(d);
    for (Qubit q = 0; q < 27; ++q) EXPECT_NE(t(0, q), kUnreachable);
    const auto adj = adjacency(d);
    for (const auto& row : adj) EXPECT_LE(row.size(), 3u);
}

TEST(Validate, RejectsBadModels) {
    auto d = chain(3, {5000, 5000, 5000}, {4700, 4700});
    EXPECT_FALSE(validate(d).empty());
    d.omega12.push_back(4700);
    EXPECT_TRUE(validate(d).empty());
    d.edges.push_back({1, 0, 1.0});
    EXPECT_FALSE(validate(d).empty());
}
