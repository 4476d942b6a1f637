#include <cmath>
#include <set>

#include "sos/clusters.hpp"
#include "test_support.hpp"

using namespace sos;

namespace {

using Graph = std::vector<std::vector<bool>>;

Graph complete(int n) {
    Graph g(n, std::vector<bool>(n, true));
    for (int i = 0; i < n; ++i) g[i][i] = false;
    return g;
}

// Sum of (-1)^|edges| over edge subsets that connect every vertex, by direct enumeration.
long brute_connected_sum(const Graph& g) {
    int n = static_cast<int>(g.size());
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (g[i][j]) edges.push_back({i, j});
    long total = 0;
    for (unsigned mask = 0; mask < (1u << edges.size()); ++mask) {
        std::vector<int> root(n);
        for (int i = 0; i < n; ++i) root[i] = i;
        auto find = [&](int a) {
            while (root[a] != a) a = root[a];
            return a;
        };
        for (std::size_t e = 0; e < edges.size(); ++e)
            if (mask >> e & 1u) root[find(edges[e].first)] = find(edges[e].second);
        bool connected = true;
        for (int i = 1; i < n; ++i) connected = connected && find(i) == find(0);
        if (connected) total += (std::popcount(mask) % 2) ? -1 : 1;
    }
    return total;
}

Perturbation placed(const Catalog& cat, const Placement& p) {
    return cat.items()[p.cls].translated(p.offset.x, p.offset.y);
}

// Per-site cluster sum built from explicit clusters of one or two occurrences.
Series pair_cluster_sum(const Catalog& cat, int N) {
    std::vector<Placement> at_origin;
    for (int c = 0; c < static_cast<int>(cat.size()); ++c)
        for (Site s : cat.items()[c].support()) at_origin.push_back({c, {-s.x, -s.y}});
    Series out(N);
    std::set<std::vector<Placement>> seen;
    auto add = [&](std::vector<Placement> occ) {
        std::sort(occ.begin(), occ.end());
        if (!seen.insert(occ).second) return;
        int n = static_cast<int>(occ.size());
        Graph g(n, std::vector<bool>(n, false));
        int norm = 0, wall = 0;
        Region support;
        for (int i = 0; i < n; ++i) {
            Perturbation a = placed(cat, occ[i]);
            norm += a.norm;
            wall += a.wall;
            support = region_union(support, a.support());
            for (int j = 0; j < n; ++j)
                if (i != j) g[i][j] = occ[i] == occ[j] || !perturbations_compatible(a, placed(cat, occ[j]));
        }
        if (norm > N) return;
        long factorial = (n == 2 && occ[0] == occ[1]) ? 2 : 1;
        Rational aT = Rational(brute_connected_sum(g)) / factorial;
        if (aT == 0) return;
        out.add(norm, wall, aT / static_cast<long>(support.size()));
    };
    const int reach = 8;
    for (const Placement& a : at_origin) {
        add({a});
        Perturbation pa = placed(cat, a);
        for (int c = 0; c < static_cast<int>(cat.size()); ++c) {
            if (pa.norm + cat.items()[c].norm > N) continue;
            for (int dx = -reach; dx <= reach; ++dx)
                for (int dy = -reach; dy <= reach; ++dy) {
                    Placement b{c, {dx, dy}};
                    if (b == a || !perturbations_compatible(pa, placed(cat, b))) add({a, b});
                }
        }
    }
    return out;
}

Series eq10(int N) {
    Series s(N);
    s.add_linear_u(1);
    s.add(2, 0, -1);
    s.add(2, 1, -1);
    s.add(2, -1, 1);
    s.add(3, 0, -2);
    s.add(3, 2, -2);
    s.add(3, -2, 2);
    return s;
}

}  // namespace

TEST(TruncatedFactor, SmallGraphs) {
    EXPECT_EQ(sos::truncated_factor(complete(1), 1), 1);
    EXPECT_EQ(sos::truncated_factor(complete(2), 1), -1);
    EXPECT_EQ(sos::truncated_factor(complete(2), 2), Rational(-1, 2));
    EXPECT_EQ(sos::truncated_factor(complete(3), 1), 2);
    Graph split(2, std::vector<bool>(2, false));
    EXPECT_SOS_ERROR(sos::truncated_factor(split, 1), ErrorCode::Disconnected);
}

TEST(TruncatedFactor, MatchesEdgeSubsetSumsUpToFourVertices) {
    for (int n = 1; n <= 4; ++n) {
        int pairs = n * (n - 1) / 2;
        for (unsigned mask = 0; mask < (1u << pairs); ++mask) {
            Graph g(n, std::vector<bool>(n, false));
            int e = 0;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j, ++e)
                    if (mask >> e & 1u) g[i][j] = g[j][i] = true;
            EXPECT_EQ(connected_spanning_signed_count(g), brute_connected_sum(g)) << n << ' ' << mask;
        }
    }
}

TEST(ClusterSum, MatchesExplicitPairsAtLevelOne) {
    const Catalog& cat = cached_catalog({8, 1, 5});
    ClusterEngine engine(cat);
    Series oracle = pair_cluster_sum(cat, 5);
    EXPECT_EQ(engine.anchored_cluster_sum(5), oracle) << engine.anchored_cluster_sum(5).pretty() << "\n"
                                                       << oracle.pretty();
    EXPECT_EQ(engine.cluster_sum(5), oracle);
}

TEST(ClusterSum, MatchesExplicitPairsAtLevelZero) {
    const Catalog& cat = cached_catalog({8, 0, 5});
    ClusterEngine engine(cat);
    EXPECT_EQ(engine.cluster_sum(5), pair_cluster_sum(cat, 5));
}

TEST(ClusterSum, TwoRootingsAgreeAtHigherOrder) {
    const Catalog& cat = cached_catalog({8, 1, 7});
    ClusterEngine engine(cat);
    EXPECT_EQ(engine.cluster_sum(7), engine.anchored_cluster_sum(7));
}

TEST(ClusterSum, EmittedClustersAreConnected) {
    const Catalog& cat = cached_catalog({8, 1, 6});
    ClusterEngine engine(cat);
    int count = 0;
    bool has_single = false, has_double = false;
    engine.for_each_cluster_at({0, 0}, 4, [&](const Cluster& x) {
        ++count;
        EXPECT_LE(x.norm, 4);
        EXPECT_NO_THROW(engine.truncated_factor(x));
        if (x.occurrences.size() == 1 && x.norm == 2) has_single = true;
        if (x.occurrences.size() == 2 && x.distinct() == 1 && x.norm == 4) has_double = true;
    });
    EXPECT_GT(count, 0);
    EXPECT_TRUE(has_single);
    EXPECT_TRUE(has_double);
    int below = 0;
    engine.for_each_cluster_at({0, 0}, 1, [&](const Cluster&) { ++below; });
    EXPECT_EQ(below, 0);
}

TEST(FreeEnergy, LevelZeroLeadingTerms) {
    Series f = free_energy(0, 8, 3);
    Series expected(3);
    expected.add_linear_u(-1);
    expected.add(2, -1, -1);
    expected.add(3, -2, -2);
    EXPECT_EQ(f, expected) << f.pretty();
}

TEST(FreeEnergy, LevelOneDifferenceToThirdOrder) {
    Series d = (free_energy(1, 8, 3) - free_energy(0, 8, 3)).truncated(3);
    EXPECT_EQ(d, eq10(3)) << d.pretty();
    EXPECT_NO_THROW(free_energy_difference(0, 8, 6));
}

TEST(FreeEnergy, HighLevelLeadingTerm) {
    Series f = free_energy(4, 8, 8);
    EXPECT_EQ(f.min_t_power(), 2);
    EXPECT_EQ(f.coefficient(8, 1), -1);
    EXPECT_EQ(f.linear_u(), 0);
}

TEST(FreeEnergy, DifferenceCoefficientsAtLevelOne) {
    DifferenceReport r = free_energy_difference(1, 8, 6);
    EXPECT_TRUE(r.residual.empty());
    EXPECT_EQ(r.coefficients.at("A"), 1);
    EXPECT_EQ(r.coefficients.at("C"), 2);
    EXPECT_EQ(r.coefficients.at("E"), 1);
    EXPECT_EQ(r.coefficients.at("G"), 4);
    EXPECT_EQ(r.coefficients.at("I"), 2);
    EXPECT_EQ(r.coefficients.at("L42"), Rational(-5, 2));
    EXPECT_EQ(r.coefficients.at("L43"), 6);
    EXPECT_EQ(r.coefficients.at("L44"), 1);
    EXPECT_EQ(r.coefficients.at("B1"), 0);
    EXPECT_EQ(r.coefficients.at("D1"), 0);
}

TEST(FreeEnergy, DifferenceCoefficientsAtLevelTwo) {
    DifferenceReport r = free_energy_difference(2, 8, 8);
    EXPECT_TRUE(r.residual.empty());
    EXPECT_EQ(r.coefficients.at("A"), 1);
    EXPECT_EQ(r.coefficients.at("C"), 2);
    EXPECT_EQ(r.coefficients.at("E"), 1);
    EXPECT_EQ(r.coefficients.at("G"), 4);
    EXPECT_EQ(r.coefficients.at("B1"), 4);
    EXPECT_EQ(r.coefficients.at("D1"), 16);
}

TEST(FreeEnergy, WallTermsRespectIsoperimetry) {
    for (int h = 1; h <= 3; ++h) EXPECT_TRUE(isoperimetric_violations(level_cluster_sum(h, 8, 8), h).empty()) << h;
    Series fake(8);
    fake.add(4, 3, 1);
    EXPECT_EQ(isoperimetric_violations(fake, 2).size(), 1u);
}

TEST(Dominance, WindowExamples) {
    double t = 0.002;
    double c = -std::log1p(-t * t);
    EXPECT_EQ(dominant_level(t, c + 3 * std::pow(t, 3), 8, 7, 4).level, 0);
    double mid1 = c + std::sqrt(3 * std::pow(t, 4) * std::pow(t, 3));
    DominanceReport one = dominant_level(t, mid1, 8, 7, 4);
    EXPECT_EQ(one.level, 1);
    EXPECT_GT(one.min_margin, 0);
    EXPECT_TRUE(one.within_convergence_range == (t < convergence_threshold(8)));
    EXPECT_EQ(dominant_level(t, 0.9 * std::sqrt(t), 8, 7, 4).level, 0);
    EXPECT_SOS_ERROR(dominant_level(t, 1.1 * std::sqrt(t), 8, 7, 4), ErrorCode::ParamsOutOfRange);
    EXPECT_SOS_ERROR(dominant_level(1.5, 0.0, 8, 7, 4), ErrorCode::ParamsOutOfRange);
}

TEST(Dominance, MarginsReferToTheWinner) {
    DominanceReport r = dominant_level(0.001, -0.01, 8, 6, 3);
    ASSERT_EQ(r.values.size(), 4u);
    for (std::size_t h = 0; h < r.values.size(); ++h) {
        EXPECT_EQ(r.margins[h], r.values[h] - r.values[r.level]);
        EXPECT_GE(r.margins[h], 0);
    }
}

TEST(Convergence, HoldsAtSmallT) {
    const Catalog& cat = cached_catalog({8, 1, 6});
    ConvergenceReport r = convergence_check(cat, 0.001, 0.0);
    EXPECT_EQ(r.entries.size(), cat.size());
    EXPECT_TRUE(r.all_ok);
    EXPECT_LE(r.worst_ratio, 1.0);
    for (const ConvergenceEntry& e : r.entries) EXPECT_LE(e.weight, e.mu);
}

TEST(Convergence, FlagsLargeT) {
    const Catalog& cat = cached_catalog({8, 1, 6});
    ConvergenceReport r = convergence_check(cat, 0.2, 0.0);
    EXPECT_FALSE(r.all_ok);
}

TEST(Convergence, ThresholdValue) { EXPECT_DOUBLE_EQ(convergence_threshold(8), std::pow(27.0, -4)); }
