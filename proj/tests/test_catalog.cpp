#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "sos/catalog.hpp"
#include "test_support.hpp"

using namespace sos;

namespace {

Region rect(int x0, int y0, int w, int h) {
    std::vector<Site> s;
    for (int y = y0; y < y0 + h; ++y)
        for (int x = x0; x < x0 + w; ++x) s.push_back({x, y});
    return make_region(s);
}

// Every height field on a side x side window (outside fixed at `level`) with at most
// 2 * max_norm vertical plaquettes, one per translation class of its disturbed sites.
class BruteForce {
public:
    BruteForce(int side, int level, int max_norm)
        : side_(side), level_(level), budget_(2 * max_norm), field_(side * side, level) {}

    std::map<std::pair<int, int>, long> histogram() {
        visit(0, 0);
        std::map<std::pair<int, int>, long> out;
        for (const auto& [key, field] : classes_) {
            CylinderSet set = decompose_field(field, 0, 0, side_, side_, level_);
            if (external_indices(set).size() != 1) continue;
            // Wall contacts gained relative to the flat surface.
            int plaquettes = 0, wall = level_ == 0 ? -side_ * side_ : 0;
            for (int y = -1; y <= side_; ++y)
                for (int x = -1; x <= side_; ++x) {
                    int here = at(field, x, y);
                    plaquettes += std::abs(here - at(field, x + 1, y)) + std::abs(here - at(field, x, y + 1));
                    if (here == 0 && x >= 0 && y >= 0 && x < side_ && y < side_) ++wall;
                }
            ++out[{plaquettes / 2, wall}];
        }
        return out;
    }

private:
    int at(const std::vector<int>& f, int x, int y) const {
        if (x < 0 || y < 0 || x >= side_ || y >= side_) return level_;
        return f[y * side_ + x];
    }

    void visit(int index, int spent) {
        if (index == side_ * side_) {
            record();
            return;
        }
        int x = index % side_, y = index / side_;
        for (int h = 0; h <= level_ + budget_ / 4; ++h) {
            field_[index] = h;
            int cost = std::abs(h - at(field_, x - 1, y)) + std::abs(h - at(field_, x, y - 1));
            if (x == side_ - 1) cost += std::abs(h - level_);
            if (y == side_ - 1) cost += std::abs(h - level_);
            if (spent + cost <= budget_) visit(index + 1, spent + cost);
        }
        field_[index] = level_;
    }

    void record() {
        int mx = side_, my = side_;
        bool any = false;
        for (int y = 0; y < side_; ++y)
            for (int x = 0; x < side_; ++x)
                if (field_[y * side_ + x] != level_) {
                    any = true;
                    mx = std::min(mx, x);
                    my = std::min(my, y);
                }
        if (!any) return;
        std::vector<int> shifted(side_ * side_, level_);
        for (int y = my; y < side_; ++y)
            for (int x = mx; x < side_; ++x) shifted[(y - my) * side_ + (x - mx)] = field_[y * side_ + x];
        classes_.emplace(shifted, shifted);
    }

    int side_, level_, budget_;
    std::vector<int> field_;
    std::map<std::vector<int>, std::vector<int>> classes_;
};

}  // namespace

TEST(Catalog, LeadingCountsAtLevelOne) {
    Catalog c = enumerate_catalog({8, 1, 6});
    EXPECT_EQ(c.count(2, 1), 1);  // unit column to the wall
    EXPECT_EQ(c.count(3, 2), 2);  // domino to the wall
    EXPECT_EQ(c.count(4, 3), 6);
    EXPECT_EQ(c.count(4, 4), 1);
}

TEST(Catalog, LeadingCountsAtLevelTwo) {
    Catalog c = enumerate_catalog({8, 2, 7});
    EXPECT_EQ(c.count(4, 1), 1);
    EXPECT_EQ(c.count(6, 2), 2);
    EXPECT_EQ(c.count(5, 1), 4);
    EXPECT_EQ(c.count(7, 2), 16);
}

TEST(Catalog, MatchesBruteForceHeightFields) {
    Catalog c = enumerate_catalog({8, 1, 6});
    BruteForce oracle(5, 1, 6);
    EXPECT_EQ(c.histogram(), oracle.histogram());
}

TEST(Catalog, MatchesBruteForceAtLevelZero) {
    Catalog c = enumerate_catalog({8, 0, 5});
    BruteForce oracle(4, 0, 5);
    EXPECT_EQ(c.histogram(), oracle.histogram());
}

TEST(Catalog, ItemsAreCanonicalAndDistinct) {
    Catalog c = enumerate_catalog({8, 1, 6});
    std::set<std::string> seen;
    for (const Perturbation& p : c.items()) {
        EXPECT_EQ(p.support().front(), (Site{0, 0}));
        EXPECT_EQ(p.canonical(), p);
        EXPECT_LE(p.norm, 6);
        EXPECT_EQ(p.level, 1);
        Classification k = classify(p);
        if (k.multi_touching) EXPECT_TRUE(k.touching);
        EXPECT_EQ(k.small_touching + k.big_touching > 0, k.touching);
        CylinderSet one{p.cylinders, p.level};
        EXPECT_TRUE(seen.insert(to_debug_text(one)).second);
    }
}

TEST(Catalog, OrderGuardRail) {
    EXPECT_SOS_ERROR(enumerate_catalog({8, 1, kMaxCatalogOrder + 1}), ErrorCode::OrderTooLarge);
}

TEST(Catalog, SerializationAndCache) {
    Catalog c = enumerate_catalog({8, 1, 5});
    Catalog back = Catalog::deserialize(c.serialize());
    EXPECT_EQ(back.serialize(), c.serialize());
    EXPECT_EQ(back.content_hash(), c.content_hash());

    auto dir = std::filesystem::temp_directory_path() / "sos_catalog_cache_test";
    std::filesystem::remove_all(dir);
    Catalog first = load_or_build_catalog({8, 1, 5}, dir.string());
    auto path = dir / catalog_file_name({8, 1, 5});
    ASSERT_TRUE(std::filesystem::exists(path));
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), {});
    Catalog second = load_or_build_catalog({8, 1, 5}, dir.string());
    EXPECT_EQ(second.serialize(), text);
    EXPECT_EQ(first.content_hash(), second.content_hash());

    std::string tampered = text;
    auto pos = tampered.rfind("p 5");
    ASSERT_NE(pos, std::string::npos);
    tampered[pos + 2] = '4';
    EXPECT_SOS_ERROR(Catalog::deserialize(tampered), ErrorCode::IoError);
    std::filesystem::remove_all(dir);
}

TEST(Decomposition, SplitsByExternalCylinder) {
    Cylinder lone(rect(0, 0, 1, 1), 2, 3);
    auto single = decompose_into_perturbations(CylinderSet{{lone}, 2}, 8);
    ASSERT_EQ(single.size(), 1u);
    EXPECT_EQ(single[0].cylinders.size(), 1u);

    Region notched = region_difference(rect(0, 0, 6, 6), rect(0, 0, 2, 2));
    Cylinder outer(notched, 2, 3), pit(rect(2, 2, 2, 2), 3, 1);
    auto nested = decompose_into_perturbations(CylinderSet{{outer, pit}, 2}, 8);
    ASSERT_EQ(nested.size(), 1u);
    EXPECT_EQ(nested[0].cylinders.size(), 2u);
    EXPECT_EQ(nested[0].norm, (24 + 2 * 8) / 2);

    Cylinder left(rect(0, 0, 2, 2), 2, 3), right(rect(5, 0, 2, 2), 2, 1);
    EXPECT_EQ(decompose_into_perturbations(CylinderSet{{left, right}, 2}, 8).size(), 2u);

    Cylinder huge(rect(0, 0, 20, 20), 2, 3);
    EXPECT_SOS_ERROR(decompose_into_perturbations(CylinderSet{{huge}, 2}, 8), ErrorCode::NonElementaryCylinder);
}

TEST(Decomposition, CompatibilityOfPerturbations) {
    auto up = make_perturbation({Cylinder(rect(0, 0, 1, 1), 2, 3)});
    auto far = make_perturbation({Cylinder(rect(3, 0, 1, 1), 2, 3)});
    auto adjacent_up = make_perturbation({Cylinder(rect(1, 0, 1, 1), 2, 3)});
    auto adjacent_down = make_perturbation({Cylinder(rect(1, 0, 1, 1), 2, 1)});
    auto overlapping = make_perturbation({Cylinder(rect(0, 0, 2, 1), 2, 1)});
    EXPECT_TRUE(perturbations_compatible(up, far));
    EXPECT_FALSE(perturbations_compatible(up, adjacent_up));
    EXPECT_TRUE(perturbations_compatible(up, adjacent_down));
    EXPECT_FALSE(perturbations_compatible(up, overlapping));
}

TEST(Classification, Examples) {
    auto column = make_perturbation({Cylinder(rect(0, 0, 1, 1), 2, 0)});
    Classification a = classify(column);
    EXPECT_TRUE(a.touching);
    EXPECT_FALSE(a.multi_touching);
    EXPECT_EQ(a.small_touching, 1);
    EXPECT_FALSE(a.simple);

    auto two = make_perturbation({Cylinder(rect(0, 0, 4, 1), 2, 1), Cylinder(rect(0, 0, 1, 1), 1, 0),
                                  Cylinder(rect(3, 0, 1, 1), 1, 0)});
    EXPECT_TRUE(classify(two).multi_touching);

    auto shallow = make_perturbation({Cylinder(rect(0, 0, 1, 1), 2, 1)});
    EXPECT_TRUE(classify(shallow).simple);
    EXPECT_FALSE(classify(shallow).touching);
}

TEST(Tornado, ChainsOverWallSites) {
    auto column = make_perturbation({Cylinder(rect(0, 0, 1, 1), 2, 0)});
    Tornado one = tornado_at(column, {0, 0});
    EXPECT_EQ(one.chain.size(), 1u);
    EXPECT_TRUE(one.valid());
    EXPECT_TRUE(one.fully_monotone());
    EXPECT_EQ(monotonize(one).chain, one.chain);

    auto plateau = make_perturbation({Cylinder(rect(0, 0, 3, 3), 2, 1), Cylinder(rect(1, 1, 1, 1), 1, 0)});
    Tornado two = tornado_at(plateau, {1, 1});
    ASSERT_EQ(two.chain.size(), 2u);
    EXPECT_EQ(two.chain[0].I, 0);
    EXPECT_EQ(two.chain[1].interior, rect(0, 0, 3, 3));
    EXPECT_TRUE(two.valid());
    EXPECT_SOS_ERROR(tornado_at(plateau, {0, 0}), ErrorCode::SiteNotAtZero);
}

TEST(Tornado, MonotonizeDropsTheOvershoot) {
    Tornado alpha;
    alpha.level = 4;
    alpha.chain = {Cylinder(rect(2, 2, 1, 1), 5, 0), Cylinder(rect(1, 1, 3, 3), 3, 5),
                   Cylinder(rect(0, 0, 5, 5), 4, 3)};
    ASSERT_TRUE(alpha.valid());
    EXPECT_FALSE(alpha.semi_monotone());
    Tornado m = monotonize(alpha);
    ASSERT_EQ(m.chain.size(), 2u);
    EXPECT_EQ(m.chain[0].interior, rect(2, 2, 1, 1));
    EXPECT_EQ(m.chain[0].I, 0);
    EXPECT_EQ(m.chain[0].E, 3);
    EXPECT_EQ(m.chain[1], alpha.chain[2]);
    EXPECT_TRUE(m.semi_monotone());
    EXPECT_TRUE(m.valid());
    EXPECT_EQ(monotonize(m).chain, m.chain);
    EXPECT_EQ(m.chain[0].perimeter, alpha.chain[0].perimeter);
}

TEST(Tornado, MonotonizeIsIdempotentOnCatalogTornadoes) {
    Catalog c = enumerate_catalog({8, 2, 7});
    int seen = 0;
    for (const Perturbation& p : c.items()) {
        for (Site s : p.support()) {
            if (p.height_at(s) != 0) continue;
            Tornado a = tornado_at(p, s);
            ASSERT_TRUE(a.valid());
            Tornado m = monotonize(a);
            EXPECT_TRUE(m.semi_monotone());
            EXPECT_EQ(monotonize(m).chain, m.chain);
            EXPECT_EQ(m.chain.front().interior, a.chain.front().interior);
            EXPECT_EQ(m.chain.front().I, 0);
            ++seen;
        }
    }
    EXPECT_GT(seen, 100);
}
