#include "sos/torus.hpp"

#include <algorithm>
#include <cmath>
#include <bit>
#include <cstdint>

#include "sos/error.hpp"

namespace sos {

TorusPolymers torus_polymers(const Catalog& catalog, int period, int max_norm) {
    if (period < 2) throw Error(ErrorCode::InvalidArgument, "torus period must be at least 2");
    ClusterEngine engine(catalog, period);
    TorusPolymers out;
    out.period = period;
    for (int c : engine.classes()) {
        const Perturbation& p = catalog.items()[c];
        if (p.norm > max_norm) break;
        for (int y = 0; y < period; ++y)
            for (int x = 0; x < period; ++x) {
                out.polymers.push_back({c, {x, y}});
                out.norms.push_back(p.norm);
                out.walls.push_back(p.wall);
            }
    }
    return out;
}

namespace {

using Bits = std::vector<std::uint64_t>;

struct IndependentSets {
    const TorusPolymers& gas;
    std::vector<Bits> conflicts;
    int M;
    std::map<std::pair<int, int>, long> counts;

    void run(const Bits& allowed, int start, int norm, int wall) {
        std::size_t words = allowed.size();
        for (std::size_t w = static_cast<std::size_t>(start) / 64; w < words; ++w) {
            std::uint64_t bits = allowed[w];
            if (w == static_cast<std::size_t>(start) / 64) bits &= ~std::uint64_t{0} << (start % 64);
            while (bits) {
                int i = static_cast<int>(w * 64 + std::countr_zero(bits));
                bits &= bits - 1;
                int n = norm + gas.norms[i];
                if (n > M) continue;
                int m = wall + gas.walls[i];
                ++counts[{n, m}];
                Bits next(words);
                for (std::size_t v = 0; v < words; ++v) next[v] = allowed[v] & ~conflicts[i][v];
                run(next, i + 1, n, m);
            }
        }
    }
};

}  // namespace

Series torus_partition(const Catalog& catalog, int period, int M) {
    TorusPolymers gas = torus_polymers(catalog, period, M);
    ClusterEngine engine(catalog, period);
    std::size_t n = gas.polymers.size();
    std::size_t words = (n + 63) / 64;
    IndependentSets sets{gas, std::vector<Bits>(n, Bits(words, 0)), M, {}};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            if (engine.incompatible(gas.polymers[i], gas.polymers[j])) {
                sets.conflicts[i][j / 64] |= std::uint64_t{1} << (j % 64);
                sets.conflicts[j][i / 64] |= std::uint64_t{1} << (i % 64);
            }
    Bits all(words, 0);
    for (std::size_t i = 0; i < n; ++i) all[i / 64] |= std::uint64_t{1} << (i % 64);
    sets.run(all, 0, 0, 0);
    Series z(M);
    z.add(0, 0, 1);
    for (auto& [key, c] : sets.counts) z.add(key.first, key.second, c);
    return z;
}

TorusComparison compare_torus(int h, int k, int period, int N, int M) {
    if (M < N) throw Error(ErrorCode::InvalidArgument, "brute order must be at least the series order");
    TorusComparison cmp;
    cmp.h = h;
    cmp.period = period;
    cmp.N = N;
    cmp.M = M;
    const Catalog& cat = cached_catalog({k, h, M});
    Series z = torus_partition(cat, period, M);
    Series w = z;
    w.add(0, 0, -1);
    cmp.log_partition_per_site = log_one_plus(w).scaled(Rational(1, period * period));
    ClusterEngine torus(cat, period);
    cmp.torus_cluster_sum = torus.cluster_sum(M);
    cmp.plane_cluster_sum = level_cluster_sum(h, k, N);
    cmp.series_agree = cmp.log_partition_per_site == cmp.torus_cluster_sum;
    cmp.plane_agrees = cmp.torus_cluster_sum.truncated(N) == cmp.plane_cluster_sum;
    if (h == 0) cmp.log_partition_per_site.add_linear_u(1);
    return cmp;
}

TorusNumeric torus_numeric(const TorusComparison& cmp, double t, double u) {
    TorusNumeric out;
    out.t = t;
    out.u = u;
    HighFloat ht(t), hu(u);
    out.log_partition_per_site = cmp.log_partition_per_site.evaluate(ht, hu);
    Series f = -cmp.plane_cluster_sum;
    if (cmp.h == 0) f.add_linear_u(-1);
    out.truncated_free_energy = f.evaluate(ht, hu);
    out.error = boost::multiprecision::abs(out.log_partition_per_site + out.truncated_free_energy);
    out.bound = 2 * boost::multiprecision::pow(ht, cmp.N + 1);
    out.ok = out.error <= out.bound;
    return out;
}

}  // namespace sos
