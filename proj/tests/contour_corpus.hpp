#pragma once

#include <random>
#include <vector>

#include "sos/contours.hpp"

namespace sos::testing {

inline Region block(int x0, int y0, int w, int h) {
    std::vector<Site> s;
    for (int y = y0; y < y0 + h; ++y)
        for (int x = x0; x < x0 + w; ++x) s.push_back({x, y});
    return make_region(s);
}

struct CorpusEntry {
    Contour contour;
    ModelParams params;
};

// Random single contours with supports of at most 30 sites, large for k = 1.
inline std::vector<CorpusEntry> contour_corpus(std::mt19937_64& rng, std::size_t wanted, int k = 1) {
    struct Shape {
        int w, h;
    };
    const std::vector<Shape> outer_shapes{{1, 7}, {2, 5}, {3, 4}, {4, 4}, {3, 5}, {4, 5}, {5, 5}, {5, 6}, {6, 4}};
    const std::vector<Shape> inner_shapes{{1, 6}, {2, 5}, {3, 4}, {4, 3}, {2, 6}};
    std::uniform_real_distribution<double> tdist(0.01, 0.08), udist(-0.3, 0.2);
    std::uniform_int_distribution<int> level(0, 2), coin(0, 3);
    std::vector<CorpusEntry> out;
    int attempts = 0;
    while (out.size() < wanted && attempts++ < 100000) {
        Shape o = outer_shapes[rng() % outer_shapes.size()];
        if (rng() % 2) std::swap(o.w, o.h);
        Region base = block(0, 0, o.w, o.h);
        if (coin(rng) == 0 && o.w > 1 && o.h > 1) base = region_difference(base, block(o.w - 1, o.h - 1, 1, 1));
        int n = level(rng);
        int steps[] = {1, -1, 2, -2};
        int I = n + steps[coin(rng)];
        if (I < 0) continue;
        std::vector<Cylinder> cyls{Cylinder(base, n, I)};
        if (coin(rng) < 2) {
            Shape s = inner_shapes[rng() % inner_shapes.size()];
            if (s.w + 2 > o.w || s.h + 2 > o.h) continue;
            int dx = 1 + static_cast<int>(rng() % (o.w - s.w - 1));
            int dy = 1 + static_cast<int>(rng() % (o.h - s.h - 1));
            int inner_I = coin(rng) < 2 ? n : I + steps[coin(rng)];
            if (inner_I < 0 || inner_I == I) continue;
            cyls.push_back(Cylinder(block(dx, dy, s.w, s.h), I, inner_I));
        }
        CylinderSet set{cyls, n};
        if (!is_compatible_set(set)) continue;
        bool all_large = true;
        for (const Cylinder& c : cyls) all_large = all_large && is_large(c, k);
        if (!all_large) continue;
        auto contours = contour_decompose(set, k);
        if (contours.size() != 1) continue;
        out.push_back({contours[0], ModelParams::from_tu(tdist(rng), udist(rng))});
    }
    return out;
}

}  // namespace sos::testing
