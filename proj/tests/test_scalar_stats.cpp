#include <gtest/gtest.h>

#include "gds/gds.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace gds;
using gds::testkit::Gen;

namespace {

DiscreteMeasureR atoms(std::vector<Atom> a) { return DiscreteMeasureR::from_atoms(std::move(a)); }

DiscreteMeasureR binomial8() {
    std::vector<Atom> a;
    double c = 1.0;
    for (int j = 0; j <= 8; ++j) {
        a.push_back({j / 8.0, c / 256.0});
        c = c * (8 - j) / (j + 1);
    }
    return atoms(a);
}

}  // namespace

TEST(PartialDiameter, Examples) {
    EXPECT_EQ(partial_diameter(atoms({{0, .5}, {1, .5}}), 0.5), 0.0);
    EXPECT_EQ(partial_diameter(atoms({{3.5, 1.0}}), 0.9), 0.0);
    EXPECT_EQ(partial_diameter(binomial8(), 0.9), 0.5);
    for (double n : {1.0, 2.0, 8.0}) EXPECT_EQ(partial_diameter(atoms({{0, .5}, {n, .5}}), 0.6), n);
}

TEST(PartialDiameter, InvalidAlpha) {
    auto m = atoms({{0, 1}});
    EXPECT_THROW(partial_diameter(m, 0.0), Error);
    EXPECT_THROW(partial_diameter(m, 1.5), Error);
}

TEST(PartialDiameter, MatchesWindowOracle) {
    Gen gen(21);
    for (int t = 0; t < 500; ++t) {
        DiscreteMeasureR m = gen.measure(9);
        double alpha = gen.coin() ? gen.lattice(1, 16, 16) : gen.real(0.01, 1.0);
        EXPECT_EQ(partial_diameter(m, alpha), oracle::partial_diameter(m, alpha));
    }
}

TEST(PartialDiameter, MonotoneInAlpha) {
    Gen gen(22);
    for (int t = 0; t < 300; ++t) {
        DiscreteMeasureR m = gen.measure(9);
        double a = gen.real(0.01, 1.0), b = gen.real(0.01, 1.0);
        if (a > b) std::swap(a, b);
        EXPECT_LE(partial_diameter(m, a), partial_diameter(m, b));
    }
}

TEST(PartialDiameter, RightContinuousInKappa) {
    Gen gen(23);
    for (int t = 0; t < 300; ++t) {
        DiscreteMeasureR m = gen.measure(8);
        double kappa = gen.lattice(1, 14, 16);
        double at = partial_diameter(m, 1.0 - kappa);
        EXPECT_EQ(partial_diameter(m, 1.0 - (kappa + 1e-9)), at);
        EXPECT_LE(partial_diameter(m, 1.0 - (kappa + 0.05)), at);
    }
}

TEST(LevyMean, Examples) {
    EXPECT_EQ(levy_mean(atoms({{2.5, 1}})), 2.5);
    EXPECT_EQ(levy_mean(atoms({{0, .5}, {1, .5}})), 0.0);
    EXPECT_EQ(levy_mean(atoms({{0, .25}, {1, .75}})), 1.0);
}

TEST(KyFan, Examples) {
    ProbVector mu({0.5, 0.5});
    EXPECT_EQ(ky_fan({1, 2}, {1, 2}, mu), 0.0);
    for (double c : {0.25, 1.0, 4.0}) EXPECT_EQ(ky_fan({c, 1 + c}, {0, 1}, mu), std::min(c, 1.0));
    EXPECT_EQ(ky_fan({0.9, 0}, {0, 0}, mu), 0.5);
}

TEST(KyFan, MatchesCandidateOracle) {
    Gen gen(24);
    for (int t = 0; t < 500; ++t) {
        std::size_t n = gen.index(1, 8);
        auto w = gen.weights(n);
        Row f = gen.row(n, 6), g = gen.row(n, 6);
        if (gen.coin())
            for (double& v : f) v /= 8;
        EXPECT_NEAR(ky_fan_weighted(f, g, w), oracle::ky_fan(f, g, w), 1e-12);
    }
}

TEST(KyFan, ZeroWeightsAllowed) {
    std::vector<double> w{0.5, 0.0, 0.5};
    EXPECT_EQ(ky_fan_weighted(Row{0, 100, 0}, Row{0, 0, 0}, w), 0.0);
}

TEST(KyFan, TriangleInequality) {
    Gen gen(25);
    for (int t = 0; t < 500; ++t) {
        std::size_t n = gen.index(1, 8);
        ProbVector mu(gen.weights(n));
        Row f = gen.row(n), g = gen.row(n), h = gen.row(n);
        EXPECT_LE(ky_fan(f, h, mu), ky_fan(f, g, mu) + ky_fan(g, h, mu) + 1e-12);
    }
}

TEST(KyFan, PullbackContraction) {
    Gen gen(26);
    for (int t = 0; t < 500; ++t) {
        std::size_t n = gen.index(1, 8);
        ProbVector mu(gen.weights(n));
        Row f = gen.row(n), g = gen.row(n);
        double l = gen.lattice(-16, 8);
        ClipMap p{gen.lattice(-8, 8), l, l + gen.lattice(0, 16)};
        EXPECT_LE(ky_fan(clip_apply(p, f), clip_apply(p, g), mu), ky_fan(f, g, mu));
    }
}

TEST(Prohorov, Examples) {
    auto d0 = atoms({{0, 1}});
    EXPECT_EQ(prohorov(d0, d0), 0.0);
    for (double c : {0.25, 1.0, 3.0}) EXPECT_EQ(prohorov(d0, atoms({{c, 1}})), std::min(c, 1.0));
    EXPECT_EQ(prohorov(d0, atoms({{0, .5}, {10, .5}})), 0.5);
}

TEST(Prohorov, MatchesSubsetOracle) {
    Gen gen(27);
    for (int t = 0; t < 400; ++t) {
        DiscreteMeasureR mu = gen.measure(4, 8), nu = gen.measure(3, 8);
        EXPECT_NEAR(prohorov(mu, nu), oracle::prohorov(mu, nu), 1e-12);
    }
}

TEST(Prohorov, Symmetric) {
    Gen gen(28);
    for (int t = 0; t < 400; ++t) {
        DiscreteMeasureR mu = gen.measure(5, 8), nu = gen.measure(5, 8);
        EXPECT_NEAR(prohorov(mu, nu), prohorov(nu, mu), 1e-12);
    }
}

TEST(Prohorov, PartialDiameterBridge) {
    Gen gen(29);
    for (int t = 0; t < 300; ++t) {
        DiscreteMeasureR mu = gen.measure(6, 8), nu = gen.measure(6, 8);
        double p = prohorov(mu, nu);
        for (double kappa : {0.05, 0.2, 0.35, 0.5}) {
            for (double eps = 0.0; eps < 1.0; eps += 0.0625) {
                if (eps <= p || kappa + eps >= 1.0) continue;
                EXPECT_LE(partial_diameter(mu, 1.0 - (kappa + eps)), partial_diameter(nu, 1.0 - kappa) + 2 * eps);
            }
        }
    }
}

TEST(Hausdorff, Examples) {
    EXPECT_EQ(hausdorff(2, 2, [](std::size_t i, std::size_t j) { return i == j ? 0.0 : 1.0; }), 0.0);
    EXPECT_EQ(hausdorff(1, 1, [](std::size_t, std::size_t) { return 3.0; }), 3.0);
    EXPECT_EQ(hausdorff(2, 1, [](std::size_t i, std::size_t) { return i == 0 ? 1.0 : 2.0; }), 2.0);
    EXPECT_THROW(hausdorff(0, 1, [](std::size_t, std::size_t) { return 0.0; }), Error);
}

TEST(BipartiteMaxFlow, SmallNetwork) {
    // left 0 -> right {0,1}, left 1 -> right {1}
    double f = bipartite_max_flow({0.5, 0.5}, {0.7, 0.3}, {{0, 1}, {1}});
    EXPECT_NEAR(f, 0.8, 1e-15);
}
