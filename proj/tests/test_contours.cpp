#include <algorithm>
#include <cmath>

#include "contour_corpus.hpp"
#include "test_support.hpp"

using namespace sos;
using sos::testing::block;

TEST(Split, SeparatesLargeFromElementary) {
    Cylinder big(block(0, 0, 5, 5), 1, 2);
    Cylinder pit(block(2, 2, 1, 1), 2, 1);
    CylinderSet set{{big, pit}, 1};
    auto [large, rest] = split_large(set, 1);
    ASSERT_EQ(large.cylinders.size(), 1u);
    EXPECT_EQ(large.cylinders[0], big);
    ASSERT_EQ(rest.cylinders.size(), 1u);
    EXPECT_EQ(rest.cylinders[0], pit);
    EXPECT_TRUE(is_compatible_set(large));

    auto [none, all] = split_large(set, 8);
    EXPECT_TRUE(none.cylinders.empty());
    EXPECT_EQ(all.cylinders.size(), 2u);
}

TEST(Split, RandomSetsRemerge) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        HeightConfig c = sos::testing::random_config(rng, 8, 3, 2);
        CylinderSet set = decompose(c);
        auto [large, rest] = split_large(set, 1);
        EXPECT_TRUE(is_compatible_set(large));
        CylinderSet merged{large.cylinders, set.level};
        merged.cylinders.insert(merged.cylinders.end(), rest.cylinders.begin(), rest.cylinders.end());
        merged.canonicalize();
        EXPECT_EQ(merged, set);
    }
}

TEST(Decompose, SingleTowerAndDisjoint) {
    Cylinder big(block(0, 0, 5, 5), 1, 2);
    auto one = contour_decompose(CylinderSet{{big}, 1}, 1);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_TRUE(one[0].internal.empty());

    Cylinder wide(block(0, 0, 6, 6), 1, 2);
    Cylinder inner(block(1, 1, 4, 3), 2, 1);
    auto tower = contour_decompose(CylinderSet{{wide, inner}, 1}, 1);
    ASSERT_EQ(tower.size(), 1u);
    ASSERT_EQ(tower[0].internal.size(), 1u);
    EXPECT_EQ(tower[0].internal[0], inner);
    EXPECT_TRUE(tower[0].valid());

    Cylinder other(block(10, 0, 4, 4), 1, 0);
    auto two = contour_decompose(CylinderSet{{big, other}, 1}, 1);
    EXPECT_EQ(two.size(), 2u);

    Cylinder small(block(0, 0, 1, 1), 1, 2);
    EXPECT_SOS_ERROR(contour_decompose(CylinderSet{{small}, 1}, 1), ErrorCode::NotLargeSet);
}

TEST(Decompose, InsideAnInternalStartsANewContour) {
    Cylinder big(block(0, 0, 8, 8), 1, 2);
    Cylinder back(block(1, 1, 6, 6), 2, 1);
    Cylinder again(block(2, 2, 4, 4), 1, 0);
    auto cs = contour_decompose(CylinderSet{{big, back, again}, 1}, 1);
    ASSERT_EQ(cs.size(), 2u);
    for (const Contour& c : cs) EXPECT_TRUE(c.valid());
}

TEST(Decompose, OrderInvariantAndPartitioned) {
    std::mt19937_64 rng(5);
    auto corpus = sos::testing::contour_corpus(rng, 40);
    ASSERT_GE(corpus.size(), 40u);
    for (const auto& entry : corpus) {
        const Contour& c = entry.contour;
        std::string why;
        EXPECT_TRUE(c.valid(&why)) << why;
        CylinderSet set = c.cylinders();
        std::shuffle(set.cylinders.begin(), set.cylinders.end(), rng);
        auto again = contour_decompose(set, 1);
        ASSERT_EQ(again.size(), 1u);
        EXPECT_EQ(again[0].cylinders(), c.cylinders());

        Region joined = c.external_support();
        std::size_t total = joined.size();
        for (std::size_t i = 0; i < c.intermediate.size(); ++i) {
            Region piece = c.intermediate_support(i);
            EXPECT_TRUE(region_disjoint(joined, piece));
            total += piece.size();
            joined = region_union(joined, piece);
        }
        EXPECT_EQ(joined, c.support());
        EXPECT_EQ(total, c.support().size());
    }
}

TEST(Weight, SquareExample) {
    Cylinder square(block(0, 0, 5, 5), 1, 0);
    auto cs = contour_decompose(CylinderSet{{square}, 1}, 1);
    ASSERT_EQ(cs.size(), 1u);
    ContourSettings settings;
    ContourWeight w = contour_weight(cs[0], ModelParams::from_tu(0.05, 0.01), settings);
    EXPECT_LT(w.relative_gap, 1e-10);
    EXPECT_GT(w.product_form, 0.0);
}

TEST(Weight, SmallTLimitIsPlaquetteCount) {
    Cylinder big(block(0, 0, 4, 4), 1, 2);
    auto cs = contour_decompose(CylinderSet{{big}, 1}, 1);
    ContourSettings settings;
    double t = 1e-6;
    ContourWeight w = contour_weight(cs[0], ModelParams::from_tu(t, 0.0), settings);
    EXPECT_LT(sos::testing::relative_gap(w.power_form, std::pow(t, cs[0].norm())), 1e-4);
    EXPECT_EQ(cs[0].norm(), 8);
}

TEST(Weight, CorpusIdentity) {
    std::mt19937_64 rng(19);
    auto corpus = sos::testing::contour_corpus(rng, 20);
    ContourSettings settings;
    for (const auto& entry : corpus) {
        ContourWeight w = contour_weight(entry.contour, entry.params, settings);
        EXPECT_LT(w.relative_gap, 1e-10);
    }
}

TEST(RestrictedPartition, EmptyCapAndMonotone) {
    ContourSettings settings;
    ModelParams p = ModelParams::from_tu(0.05, 0.0);
    EXPECT_EQ(restricted_partition(BoundedRegion{{}, 1, nullptr, {}}, p, settings), 1.0);
    EXPECT_SOS_ERROR(restricted_partition(BoundedRegion{block(0, 0, 6, 6), 1, nullptr, {}}, p, settings),
                     ErrorCode::RegionTooLarge);
    double one = restricted_partition(BoundedRegion{block(0, 0, 1, 1), 1, nullptr, {}}, p, settings);
    // A lone site at level one: a bump, a pit to the wall, and a two-step column.
    EXPECT_NEAR(one, 1 + 2 * 0.05 * 0.05 + std::pow(0.05, 4), 1e-12);
    double two = restricted_partition(BoundedRegion{block(0, 0, 2, 1), 1, nullptr, {}}, p, settings);
    EXPECT_GT(two, one);
}

TEST(RestrictedPartition, SignConditionAtTheRim) {
    ContourSettings settings;
    ModelParams p = ModelParams::from_tu(0.05, 0.0);
    Cylinder rim(block(0, 0, 3, 3), 0, 1);
    BoundedRegion free_region{block(1, 1, 1, 1), 1, nullptr, {}};
    BoundedRegion bounded{block(0, 0, 1, 1), 1, &rim, {}};
    double unrestricted = restricted_partition(BoundedRegion{block(0, 0, 1, 1), 1, nullptr, {}}, p, settings);
    EXPECT_LT(restricted_partition(bounded, p, settings), unrestricted);
    EXPECT_EQ(restricted_partition(free_region, p, settings), unrestricted);
}

TEST(Boundary, VerticesOfASquare) {
    auto v = boundary_vertices(block(0, 0, 2, 2));
    EXPECT_EQ(v.size(), 8u);
    EXPECT_FALSE(std::binary_search(v.begin(), v.end(), Site{1, 1}));
}
