#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gds/gds.hpp"
#include "test_support.hpp"

using namespace gds;
using gds::testkit::Gen;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double total(const ProbVector& p) { return std::accumulate(p.values().begin(), p.values().end(), 0.0); }

FiniteGDS permuted(const FiniteGDS& x, const std::vector<std::size_t>& perm) {
    Matrix rows;
    for (std::size_t r = x.num_generators(); r-- > 0;) {
        Row f(x.num_points());
        for (std::size_t i = 0; i < x.num_points(); ++i) f[perm[i]] = x.generator(r)[i];
        rows.push_back(f);
    }
    std::vector<double> w(x.num_points());
    for (std::size_t i = 0; i < x.num_points(); ++i) w[perm[i]] = x.mu()[i];
    return make_gds(rows, x.family(), w);
}

}  // namespace

TEST(Quotient, Examples) {
    FiniteGDS x = make_gds({{0, 1, 2}, {3, 3, 4}}, FamilyTag::tb());
    QuotientResult all = quotient(x, x.generators());
    EXPECT_EQ(all.space.num_points(), 3u);
    EXPECT_EQ(all.map, (std::vector<std::size_t>{0, 1, 2}));
    QuotientResult one = quotient(x, {{7, 7, 7}});
    EXPECT_EQ(one.space.num_points(), 1u);
    EXPECT_EQ(one.space.mu()[0], 1.0);
    FiniteGDS y = make_gds({{0, 3}}, FamilyTag::tb());
    QuotientResult c = quotient(y, {{0, 1}});
    EXPECT_EQ(c.space.generator(0), (Row{0, 1}));
    EXPECT_THROW(quotient(y, {}), Error);
}

TEST(Quotient, FirstOccurrenceNumberingAndIds) {
    FiniteGDS x = make_gds({{2, 0, 2, 1}, {0, 1, 2, 3}}, FamilyTag::tb(), {0.125, 0.25, 0.375, 0.25});
    QuotientResult q = quotient(x, {{2, 0, 2, 1}});
    EXPECT_EQ(q.map, (std::vector<std::size_t>{0, 1, 0, 2}));
    EXPECT_EQ(q.space.point_ids(), (std::vector<std::string>{"0", "1", "3"}));
    EXPECT_EQ(q.space.mu().values(), (std::vector<double>{0.5, 0.25, 0.25}));
    EXPECT_EQ(q.space.family(), x.family());
}

TEST(Quotient, PushesMeasureForward) {
    Gen gen(51);
    for (int t = 0; t < 300; ++t) {
        FiniteGDS x = gen.gds(9, 3, FamilyTag::tb(), 2);
        Matrix g;
        for (const Row& f : x.generators())
            if (gen.coin()) g.push_back(f);
        if (g.empty()) g.push_back(x.generator(0));
        QuotientResult q = quotient(x, g);
        EXPECT_NEAR(total(q.space.mu()), 1.0, 1e-12);
        std::vector<double> push(q.space.num_points(), 0.0);
        for (std::size_t i = 0; i < x.num_points(); ++i) push[q.map[i]] += x.mu()[i];
        for (std::size_t k = 0; k < push.size(); ++k) EXPECT_NEAR(push[k], q.space.mu()[k], 1e-15);
        // the quotient generators are the rows of g read through the map
        for (std::size_t r = 0; r < g.size(); ++r)
            for (std::size_t i = 0; i < x.num_points(); ++i) EXPECT_EQ(q.space.generator(r)[q.map[i]], g[r][i]);
    }
}

TEST(Measurement, Examples) {
    FiniteGDS x = make_gds({{0, 3}, {1, -2}}, FamilyTag::tb());
    EXPECT_EQ(measurement(x, {{0, 1}, 10.0}), x);
    FiniteGDS y = make_gds({{0, 3}}, FamilyTag::tb());
    FiniteGDS m = measurement(y, {{0}, 1.0});
    EXPECT_EQ(m.generator(0), (Row{0, 1}));
    EXPECT_EQ(induced_metric(m)[0][1], 1.0);
    FiniteGDS z = make_gds({{5, 7}}, FamilyTag::tb());
    EXPECT_EQ(measurement(z, {{0}, 2.0}).num_points(), 1u);
    EXPECT_THROW(measurement(z, {{1}, 2.0}), Error);
    EXPECT_THROW(measurement(z, {{0}, -1.0}), Error);
    EXPECT_THROW(measurement(z, {{}, 1.0}), Error);
}

TEST(Measurement, ClippingIdempotent) {
    Gen gen(52);
    for (int t = 0; t < 300; ++t) {
        FiniteGDS x = gen.gds(8, 4, FamilyTag::tb());
        std::vector<std::size_t> feats;
        for (std::size_t i = 0; i < x.num_generators(); ++i)
            if (gen.coin()) feats.push_back(i);
        if (feats.empty()) feats.push_back(0);
        double r = gen.lattice(1, 12), s = r + gen.lattice(0, 12);
        FiniteGDS once = measurement(x, {feats, r});
        std::vector<std::size_t> allf(once.num_generators());
        std::iota(allf.begin(), allf.end(), 0);
        EXPECT_EQ(measurement(once, {allf, s}), once);
    }
}

TEST(Measurement, DominatedAndOdMonotone) {
    Gen gen(53);
    for (int t = 0; t < 100; ++t) {
        FiniteGDS x = gen.gds(6, 3, FamilyTag::tb());
        std::vector<std::size_t> feats{gen.index(0, x.num_generators() - 1)};
        FiniteGDS m = measurement(x, {feats, gen.lattice(1, 12)});
        DominationVerdict v = check_domination(x, m);
        EXPECT_EQ(v.status, DominationVerdict::Status::Dominates) << v.certificate;
        EXPECT_TRUE(v.certified);
        for (double kappa : {0.1, 0.3, 0.6}) EXPECT_LE(observable_diameter(m, kappa), observable_diameter(x, kappa));
    }
}

TEST(EnumerateMeasurements, Examples) {
    FiniteGDS x = make_gds({{0, 1, 2}, {2, 0, 1}, {1, 1, 0}}, FamilyTag::tb());
    MeasurementSet one = enumerate_measurements(x, 1, 5.0, 10, 1);
    EXPECT_EQ(one.members.size(), 3u);
    EXPECT_TRUE(one.exhaustive);
    MeasurementSet all = enumerate_measurements(x, 5, 1.5, 10, 1);
    ASSERT_EQ(all.members.size(), 1u);
    EXPECT_EQ(all.members[0], compose_family(x, ClipMap::bound(1.5)));
    EXPECT_THROW(enumerate_measurements(x, 0, 1.0, 10, 1), Error);
}

TEST(EnumerateMeasurements, SampledIsDeterministic) {
    Gen gen(54);
    Matrix rows;
    for (int r = 0; r < 20; ++r) rows.push_back(gen.row(5));
    rows[0] = {0, 1, 2, 3, 4};
    FiniteGDS x = make_gds(rows, FamilyTag::tb());
    MeasurementSet a = enumerate_measurements(x, 3, kInf, 100, 9);
    MeasurementSet b = enumerate_measurements(x, 3, kInf, 100, 9);
    EXPECT_EQ(a.members.size(), 100u);
    EXPECT_FALSE(a.exhaustive);
    EXPECT_EQ(a.members, b.members);
    for (std::size_t i = 0; i < a.specs.size(); ++i) {
        EXPECT_EQ(a.specs[i].features, b.specs[i].features);
        EXPECT_EQ(a.specs[i].features.size(), 3u);
    }
    for (std::size_t i = 1; i < a.specs.size(); ++i) EXPECT_NE(a.specs[i - 1].features, a.specs[i].features);
}

TEST(CheckDomination, Examples) {
    FiniteGDS x = make_gds({{0, 1, 2, 5}, {1, 0, 0, 1}}, FamilyTag::tb());
    QuotientResult q = quotient(x, {x.generator(1)});
    EXPECT_EQ(check_domination(x, q.space).status, DominationVerdict::Status::Dominates);

    FiniteGDS pt = make_gds({{3.0}, {-1.0}}, FamilyTag::tb());
    EXPECT_EQ(check_domination(x, pt).status, DominationVerdict::Status::Dominates);

    DominationVerdict v = check_domination(testkit::two_point(1), testkit::two_point(2));
    EXPECT_EQ(v.status, DominationVerdict::Status::NotDominated);
    EXPECT_TRUE(v.exhaustive);
    EXPECT_EQ(check_domination(testkit::two_point(2), testkit::two_point(1)).status,
              DominationVerdict::Status::Dominates);
}

TEST(CheckDomination, WitnessPreservesMeasure) {
    Gen gen(55);
    for (int t = 0; t < 60; ++t) {
        FiniteGDS x = gen.gds(6, 2, FamilyTag::tb(), 3);
        Matrix g{x.generator(0)};
        QuotientResult q = quotient(x, g);
        DominationVerdict v = check_domination(x, q.space);
        ASSERT_EQ(v.status, DominationVerdict::Status::Dominates);
        std::vector<double> push(q.space.num_points(), 0.0);
        for (std::size_t i = 0; i < x.num_points(); ++i) push[v.witness_map[i]] += x.mu()[i];
        for (std::size_t k = 0; k < push.size(); ++k) EXPECT_NEAR(push[k], q.space.mu()[k], 1e-9);
    }
}

TEST(CheckDomination, BudgetExhaustedIsUnknown) {
    Gen gen(56);
    Matrix rows{{0, 1, 2, 3, 4, 5, 6, 7}};
    FiniteGDS x = make_gds(rows, FamilyTag::tb());
    FiniteGDS y = make_gds({{0, 9, 1, 8, 2, 7, 3, 6}}, FamilyTag::tb());
    DominationVerdict v = check_domination(x, y, kDefaultTol, 1);
    EXPECT_EQ(v.status, DominationVerdict::Status::Unknown);
    EXPECT_FALSE(v.exhaustive);
}

TEST(IsIsomorphic, PermutedCopy) {
    Gen gen(57);
    for (int t = 0; t < 100; ++t) {
        FiniteGDS x = gen.gds(6, 3, FamilyTag::tb());
        std::vector<std::size_t> perm(x.num_points());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), gen.engine());
        EXPECT_TRUE(is_isomorphic(x, permuted(x, perm)));
    }
    EXPECT_FALSE(is_isomorphic(testkit::two_point(1), testkit::two_point(2)));
}
