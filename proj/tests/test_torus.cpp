#include <cmath>

#include "sos/torus.hpp"
#include "test_support.hpp"

using namespace sos;

TEST(Torus, PolymersFitTheTorus) {
    const Catalog& cat = cached_catalog({8, 1, 6});
    TorusPolymers gas = torus_polymers(cat, 4, 6);
    ASSERT_FALSE(gas.polymers.empty());
    for (std::size_t i = 0; i < gas.polymers.size(); ++i) {
        const Placement& p = gas.polymers[i];
        EXPECT_GE(p.offset.x, 0);
        EXPECT_LT(p.offset.x, 4);
        EXPECT_GE(p.offset.y, 0);
        EXPECT_LT(p.offset.y, 4);
        EXPECT_LE(gas.norms[i], 6);
        int xmax = 0, ymax = 0;
        for (Site s : cat.items()[p.cls].support()) {
            xmax = std::max(xmax, s.x);
            ymax = std::max(ymax, s.y);
        }
        EXPECT_LT(xmax - 0, 4);
        EXPECT_LT(ymax - 0, 4);
    }
}

TEST(Torus, PartitionMatchesPairEnumeration) {
    const Catalog& cat = cached_catalog({8, 1, 4});
    const int M = 4;
    TorusPolymers gas = torus_polymers(cat, 4, M);
    ClusterEngine engine(cat, 4);
    Series expected(M);
    expected.add(0, 0, 1);
    for (std::size_t i = 0; i < gas.polymers.size(); ++i) {
        expected.add(gas.norms[i], gas.walls[i], 1);
        for (std::size_t j = i + 1; j < gas.polymers.size(); ++j)
            if (gas.norms[i] + gas.norms[j] <= M && !engine.incompatible(gas.polymers[i], gas.polymers[j]))
                expected.add(gas.norms[i] + gas.norms[j], gas.walls[i] + gas.walls[j], 1);
    }
    EXPECT_EQ(torus_partition(cat, 4, M), expected);
}

TEST(Torus, LogPartitionEqualsClusterSum) {
    for (int h : {0, 1}) {
        TorusComparison c = compare_torus(h, 8, 4, 4, 6);
        EXPECT_TRUE(c.series_agree) << h;
        EXPECT_TRUE(c.plane_agrees) << h;
        EXPECT_EQ(c.log_partition_per_site.linear_u(), h == 0 ? 1 : 0);
        TorusNumeric n = torus_numeric(c, 0.01, 0.0);
        // The plane sum is truncated at t^4, so the gap is of order t^5.
        EXPECT_LT(n.error, 100 * std::pow(0.01, 5)) << h;
        EXPECT_GT(n.error, 0);
    }
}
