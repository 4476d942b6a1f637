#include "sos/clusters.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numeric>
#include <set>
#include <unordered_set>

#include "sos/error.hpp"

namespace sos {

int Cluster::distinct() const {
    int n = 0;
    for (std::size_t i = 0; i < occurrences.size(); ++i)
        if (i == 0 || occurrences[i] != occurrences[i - 1]) ++n;
    return n;
}

long connected_spanning_signed_count(const std::vector<std::vector<bool>>& adjacency) {
    int r = static_cast<int>(adjacency.size());
    if (r == 0) return 0;
    if (r > 16) throw Error(ErrorCode::OrderTooLarge, "cluster has too many occurrences");
    std::vector<unsigned> nbr(r, 0);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            if (i != j && adjacency[i][j]) nbr[i] |= 1u << j;
    unsigned full = (1u << r) - 1;
    // Summing (-1)^|G| over all edge subsets of the induced graph gives 1 exactly when it has no edges.
    auto edgeless = [&](unsigned w) {
        for (int i = 0; i < r; ++i)
            if ((w >> i & 1u) && (nbr[i] & w)) return false;
        return true;
    };
    std::vector<long> conn(full + 1, 0);
    for (unsigned v = 1; v <= full; ++v) {
        unsigned low = v & (~v + 1);
        long value = edgeless(v) ? 1 : 0;
        unsigned rest = v & ~low;
        // Proper subsets of v containing its lowest vertex.
        for (unsigned sub = rest;; sub = (sub - 1) & rest) {
            unsigned part = sub | low;
            if (part != v && edgeless(v & ~part)) value -= conn[part];
            if (sub == 0) break;
        }
        conn[v] = value;
    }
    return conn[full];
}

Rational truncated_factor(const std::vector<std::vector<bool>>& adjacency, long multiplicity_factorial) {
    int r = static_cast<int>(adjacency.size());
    // Connectivity check by search.
    std::vector<bool> seen(r, false);
    std::vector<int> stack{0};
    seen[0] = true;
    int reached = 1;
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        for (int j = 0; j < r; ++j)
            if (!seen[j] && adjacency[i][j]) {
                seen[j] = true;
                ++reached;
                stack.push_back(j);
            }
    }
    if (reached != r) throw Error(ErrorCode::Disconnected, "incompatibility graph is not connected");
    return Rational(connected_spanning_signed_count(adjacency), multiplicity_factorial);
}

namespace {

const Site kHaloSteps[6] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}};

}  // namespace

ClusterEngine::ClusterEngine(const Catalog& catalog, int period) : catalog_(catalog), period_(period) {
    const auto& items = catalog.items();
    halo_.resize(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        const Region& s = items[i].support();
        int xmin = s.front().x, xmax = s.front().x, ymin = s.front().y, ymax = s.front().y;
        std::vector<Site> h(s.begin(), s.end());
        for (Site x : s) {
            xmin = std::min(xmin, x.x);
            xmax = std::max(xmax, x.x);
            ymin = std::min(ymin, x.y);
            ymax = std::max(ymax, x.y);
            for (Site d : kHaloSteps) h.push_back({x.x + d.x, x.y + d.y});
        }
        halo_[i] = make_region(std::move(h));
        if (period_ > 0 && (xmax - xmin + 1 >= period_ || ymax - ymin + 1 >= period_)) continue;
        classes_.push_back(static_cast<int>(i));
    }
    std::stable_sort(classes_.begin(), classes_.end(),
                     [&](int a, int b) { return items[a].norm < items[b].norm; });
}

Site ClusterEngine::wrap(Site s) const {
    if (period_ <= 0) return s;
    auto m = [&](int v) { return ((v % period_) + period_) % period_; };
    return {m(s.x), m(s.y)};
}

std::vector<Site> ClusterEngine::placed_support(const Placement& p) const {
    std::vector<Site> out;
    for (Site s : catalog_.items()[p.cls].support()) out.push_back(wrap({s.x + p.offset.x, s.y + p.offset.y}));
    return make_region(std::move(out));
}

bool ClusterEngine::incompatible(const Placement& a, const Placement& b) const {
    if (a == b) return true;
    const auto& items = catalog_.items();
    const Perturbation& pa = items[a.cls];
    const Perturbation& pb = items[b.cls];
    const Region& keys = pa.sign() == pb.sign() ? halo_[a.cls] : pa.support();
    if (period_ <= 0) {
        int dx = b.offset.x - a.offset.x, dy = b.offset.y - a.offset.y;
        for (Site s : pb.support())
            if (std::binary_search(keys.begin(), keys.end(), Site{s.x + dx, s.y + dy})) return true;
        return false;
    }
    std::vector<Site> placed;
    for (Site k : keys) placed.push_back(wrap({k.x + a.offset.x, k.y + a.offset.y}));
    std::sort(placed.begin(), placed.end());
    for (Site s : pb.support())
        if (std::binary_search(placed.begin(), placed.end(), wrap({s.x + b.offset.x, s.y + b.offset.y}))) return true;
    return false;
}

Rational ClusterEngine::truncated_factor(const Cluster& x) const {
    const auto& occ = x.occurrences;
    std::size_t r = occ.size();
    std::vector<std::vector<bool>> adj(r, std::vector<bool>(r, false));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j) adj[i][j] = adj[j][i] = incompatible(occ[i], occ[j]);
    long fact = 1;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= r; ++i) {
        if (i < r && occ[i] == occ[i - 1]) {
            ++run;
            fact *= static_cast<long>(run);
        } else {
            run = 1;
        }
    }
    return sos::truncated_factor(adj, fact);
}

std::vector<Placement> ClusterEngine::neighbours(const Placement& p, int budget) const {
    const auto& items = catalog_.items();
    const Perturbation& pp = items[p.cls];
    std::vector<Placement> out;
    std::vector<Site> offsets;
    for (int c : classes_) {
        const Perturbation& q = items[c];
        if (q.norm > budget) break;
        const Region& keys = q.sign() == pp.sign() ? halo_[p.cls] : pp.support();
        offsets.clear();
        for (Site k : keys)
            for (Site s : q.support())
                offsets.push_back(wrap({k.x + p.offset.x - s.x, k.y + p.offset.y - s.y}));
        std::sort(offsets.begin(), offsets.end());
        offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
        for (Site d : offsets) out.push_back({c, d});
    }
    return out;
}

void ClusterEngine::for_each_cluster_containing(const Placement& root, int N,
                                                const std::function<void(const Cluster&)>& visit) const {
    const Perturbation& p = catalog_.items()[root.cls];
    if (p.norm > N) return;
    std::set<std::vector<Placement>> seen;
    Cluster x;
    x.occurrences = {root};
    x.norm = p.norm;
    x.wall = p.wall;
    seen.insert(x.occurrences);
    visit(x);
    // Every multiset is emitted the first time it is reached.
    std::function<void(const Cluster&)> grow = [&](const Cluster& c) {
        int budget = N - c.norm;
        if (budget < 1) return;
        std::vector<Placement> cands;
        for (std::size_t i = 0; i < c.occurrences.size(); ++i) {
            if (i > 0 && c.occurrences[i] == c.occurrences[i - 1]) continue;
            auto more = neighbours(c.occurrences[i], budget);
            cands.insert(cands.end(), more.begin(), more.end());
        }
        std::sort(cands.begin(), cands.end());
        cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
        for (const Placement& q : cands) {
            const Perturbation& pq = catalog_.items()[q.cls];
            if (c.norm + pq.norm > N) continue;
            Cluster y = c;
            y.occurrences.insert(std::upper_bound(y.occurrences.begin(), y.occurrences.end(), q), q);
            y.norm += pq.norm;
            y.wall += pq.wall;
            if (!seen.insert(y.occurrences).second) continue;
            visit(y);
            grow(y);
        }
    };
    grow(x);
}

void ClusterEngine::for_each_cluster_at(Site anchor, int N, const std::function<void(const Cluster&)>& visit) const {
    std::set<std::vector<Placement>> emitted;
    for (int c : classes_) {
        const Perturbation& p = catalog_.items()[c];
        if (p.norm > N) break;
        for (Site s : p.support()) {
            Placement root{c, wrap({anchor.x - s.x, anchor.y - s.y})};
            for_each_cluster_containing(root, N, [&](const Cluster& x) {
                if (emitted.insert(x.occurrences).second) visit(x);
            });
        }
    }
}

Series ClusterEngine::cluster_sum(int N) const {
    // Denominators divide X! * n(X); with at most five occurrences a common scale of 7200 is exact.
    constexpr long kScale = 7200;
    std::map<std::pair<int, int>, long> scaled;
    std::map<std::pair<int, int>, Rational> overflow;
    for (int c : classes_) {
        if (catalog_.items()[c].norm > N) break;
        for_each_cluster_containing({c, {0, 0}}, N, [&](const Cluster& x) {
            Rational a = truncated_factor(x) / x.distinct();
            auto key = std::make_pair(x.norm, x.wall);
            Rational s = a * kScale;
            if (boost::multiprecision::denominator(s) == 1 && x.occurrences.size() <= 5)
                scaled[key] += static_cast<long>(boost::multiprecision::numerator(s));
            else
                overflow[key] += a;
        });
    }
    Series out(N);
    for (auto& [k, v] : scaled) out.add(k.first, k.second, Rational(v, kScale));
    for (auto& [k, v] : overflow) out.add(k.first, k.second, v);
    return out;
}

Series ClusterEngine::anchored_cluster_sum(int N) const {
    Series out(N);
    for_each_cluster_at({0, 0}, N, [&](const Cluster& x) {
        std::vector<Site> supp;
        for (const Placement& p : x.occurrences) {
            auto s = placed_support(p);
            supp.insert(supp.end(), s.begin(), s.end());
        }
        std::size_t area = make_region(std::move(supp)).size();
        out.add(x.norm, x.wall, truncated_factor(x) / static_cast<long>(area));
    });
    return out;
}

namespace {

std::mutex g_cache_mutex;
std::string g_catalog_dir;
std::map<std::tuple<int, int, int>, std::unique_ptr<Catalog>> g_catalogs;
std::map<std::tuple<int, int, int>, Series> g_level_sums;

}  // namespace

void set_catalog_directory(const std::string& dir) {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    g_catalog_dir = dir;
}

const Catalog& cached_catalog(const CatalogKey& key) {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto id = std::make_tuple(key.k, key.h, key.N);
    auto it = g_catalogs.find(id);
    if (it != g_catalogs.end()) return *it->second;
    Catalog c = g_catalog_dir.empty() ? enumerate_catalog(key) : load_or_build_catalog(key, g_catalog_dir);
    auto res = g_catalogs.emplace(id, std::make_unique<Catalog>(std::move(c)));
    return *res.first->second;
}

Series level_cluster_sum(int h, int k, int N) {
    if (N > kMaxCatalogOrder) throw Error(ErrorCode::OrderTooLarge, "series order above the catalog cap");
    if (h < 0 || N < 0) throw Error(ErrorCode::InvalidArgument, "negative level or order");
    auto id = std::make_tuple(k, h, N);
    {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        auto it = g_level_sums.find(id);
        if (it != g_level_sums.end()) return it->second;
    }
    const Catalog& cat = cached_catalog({k, h, N});
    ClusterEngine engine(cat);
    Series s = engine.cluster_sum(N);
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    g_level_sums.emplace(id, s);
    return s;
}

Series free_energy(int h, int k, int N) {
    Series f = -level_cluster_sum(h, k, N);
    if (h == 0) f.add_linear_u(-1);
    return f;
}

namespace {

// Coefficients of e^{mu} as a t-only series.
Series eu_slice(const Series& s, int m) {
    Series out(s.order());
    for (auto& [k, c] : s.terms())
        if (k.second == m) out.add_half(k.first, 0, c);
    return out;
}

Series monomial(int order, int t_power, int eu_power, const Rational& c) {
    Series s(order);
    s.add(t_power, eu_power, c);
    return s;
}

// e^{mu} - 1 - c t^2 e^u
Series wall_factor(int order, int m, int c) {
    Series s(order);
    s.add(0, m, 1);
    s.add(0, 0, -1);
    s.add(2, 1, -c);
    return s;
}

bool l_term_allowed(int h, int j) {
    if (h == 1) return j >= 4 && j <= 6;
    if (h == 2 || h == 3) return j == 3 * h + 2 || j == 3 * h + 3;
    return false;
}

long off_wall_count(int h, int k, int norm, int wall) {
    if (norm > kMaxCatalogOrder) throw Error(ErrorCode::OrderTooLarge, "count needs a catalog beyond the cap");
    const Catalog& cat = cached_catalog({k, h, norm});
    long n = 0;
    for (const Perturbation& p : cat.items())
        if (p.norm == norm && p.wall == wall && p.external().I != 0) ++n;
    return n;
}

}  // namespace

std::vector<std::pair<int, int>> isoperimetric_violations(const Series& s, int h) {
    std::vector<std::pair<int, int>> out;
    for (auto& [key, c] : s.terms()) {
        int m = key.second;
        // key.first is twice the t power: 4 h^2 m <= j^2 becomes 16 h^2 m <= (2j)^2.
        if (m > 0 && 16L * h * h * m > static_cast<long>(key.first) * key.first) out.push_back({key.first, m});
    }
    return out;
}

long off_wall_double_contacts(int h, int k) { return off_wall_count(h, k, 3 * h + 1, 2); }
long off_wall_single_contacts(int h, int k) { return off_wall_count(h, k, 2 * h + 1, 1); }

DifferenceReport free_energy_difference(int h, int k, int N) {
    DifferenceReport rep;
    rep.h = h;
    rep.order = N;
    rep.difference = free_energy(h + 1, k, N) - free_energy(h, k, N);
    if (h == 0) {
        rep.checked_order = std::min(N, 3);
        Series tpl(N);
        tpl.add_linear_u(1);
        for (int m : {0, 1, -1}) tpl.add(2, m, m == -1 ? 1 : -1);
        for (int m : {0, 2, -2}) tpl.add(3, m, m == -2 ? 2 : -2);
        rep.template_part = tpl;
    } else {
        rep.checked_order = std::min(N, 3 * h + 3);
        Series lower = level_cluster_sum(h, k, N);
        Series upper = level_cluster_sum(h + 1, k, N);
        if (!isoperimetric_violations(lower, h).empty() || !isoperimetric_violations(upper, h + 1).empty())
            throw Error(ErrorCode::TemplateMismatch, "wall term beyond the isoperimetric bound");
        Series p = eu_slice(lower, 1) - monomial(N, 2 * h, 0, 1);
        Series q = eu_slice(lower, 2) - monomial(N, 3 * h, 0, 2);
        Series tpl(N);
        for (auto& [key, c] : lower.terms()) {
            int j = key.first / 2, m = key.second;
            bool pair_term = h == 1 && j == 4 && m == 2;
            if (j > rep.checked_order || !(m >= 3 || pair_term) || !l_term_allowed(h, j)) continue;
            rep.coefficients["L" + std::to_string(j) + std::to_string(m)] = c;
            tpl = tpl + monomial(N, j, 0, c).times(wall_factor(N, m, j == 4 && h == 1 ? m : 0));
            if (pair_term) q = q - monomial(N, 4, 0, c);
        }
        tpl = tpl + (monomial(N, 2 * h, 0, 1) + p).times(wall_factor(N, 1, 1));
        tpl = tpl + (monomial(N, 3 * h, 0, 2) + q).times(wall_factor(N, 2, 2));
        tpl.add(3 * h + 3, 2, -2);
        rep.template_part = tpl;

        auto put = [&](const std::string& name, int order, const Rational& v) {
            if (order <= N) rep.coefficients[name] = v;
        };
        put("A", 2 * h, lower.coefficient(2 * h, 1));
        put("C", 3 * h, lower.coefficient(3 * h, 2));
        put("E", 2 * h + 2, upper.coefficient(2 * h + 2, 1));
        // The t^{3h+2} e^u term of S_{h+1} also carries t^2 times the t^{3h} part of P_h.
        put("G", 3 * h + 2, upper.coefficient(3 * h + 2, 1) - lower.coefficient(3 * h, 1));
        put("G_total", 3 * h + 2, upper.coefficient(3 * h + 2, 1));
        put("I", 3 * h + 3, upper.coefficient(3 * h + 3, 2));
        put("B1_total", 2 * h + 1, lower.coefficient(2 * h + 1, 1));
        put("D1_total", 3 * h + 1, lower.coefficient(3 * h + 1, 2));
        if (2 * h + 1 <= N) rep.coefficients["B1"] = off_wall_single_contacts(h, k);
        if (3 * h + 1 <= N) rep.coefficients["D1"] = off_wall_double_contacts(h, k);
    }
    Series residual = (rep.difference - rep.template_part).slice(0, rep.checked_order);
    Rational lin = rep.difference.linear_u() - rep.template_part.linear_u();
    if (lin != 0) residual.add_linear_u(lin);
    rep.residual = residual;
    if (!residual.empty())
        throw Error(ErrorCode::TemplateMismatch,
                    "f(" + std::to_string(h + 1) + ")-f(" + std::to_string(h) + ") leaves " + residual.pretty() +
                        " up to t^" + std::to_string(rep.checked_order));
    return rep;
}

double convergence_threshold(int k) { return std::pow(3.0 * k + 3.0, -4.0); }

DominanceReport dominant_level(const HighFloat& t, const HighFloat& u, int k, int N, int h_max) {
    if (!(t > 0 && t < 1)) throw Error(ErrorCode::ParamsOutOfRange, "need 0 < t < 1");
    if (u > boost::multiprecision::sqrt(t)) throw Error(ErrorCode::ParamsOutOfRange, "need u <= sqrt(t)");
    if (h_max < 0) throw Error(ErrorCode::InvalidArgument, "h_max must be nonnegative");
    DominanceReport rep;
    rep.within_convergence_range = t < HighFloat(convergence_threshold(k));
    for (int h = 0; h <= h_max; ++h) rep.values.push_back(free_energy(h, k, N).evaluate(t, u));
    rep.level = 0;
    for (int h = 1; h <= h_max; ++h)
        if (rep.values[h] < rep.values[rep.level]) rep.level = h;
    bool first = true;
    for (int h = 0; h <= h_max; ++h) {
        rep.margins.push_back(rep.values[h] - rep.values[rep.level]);
        if (h == rep.level) continue;
        if (first || rep.margins.back() < rep.min_margin) rep.min_margin = rep.margins.back();
        first = false;
        if (rep.margins.back() == 0) rep.tie = true;
    }
    return rep;
}

DominanceReport dominant_level(double t, double u, int k, int N, int h_max) {
    return dominant_level(HighFloat(t), HighFloat(u), k, N, h_max);
}

ConvergenceReport convergence_check(const Catalog& catalog, double t, double u) {
    ConvergenceReport rep;
    rep.t = t;
    rep.u = u;
    rep.s = t * std::exp(std::pow(t, 0.25));
    const auto& items = catalog.items();
    // mu summed per (support, sign); incompatibility only sees the external cylinder.
    std::map<Region, std::pair<double, double>> groups;
    for (const Perturbation& p : items) {
        double mu = std::pow(rep.s, p.norm);
        auto& g = groups[p.support()];
        (p.sign() > 0 ? g.first : g.second) += mu;
    }
    std::map<std::pair<Region, int>, double> neighbourhood;
    std::vector<Site> diffs;
    auto count_offsets = [&](const Region& keys, const Region& supp) {
        diffs.clear();
        for (Site k : keys)
            for (Site s : supp) diffs.push_back({k.x - s.x, k.y - s.y});
        std::sort(diffs.begin(), diffs.end());
        return static_cast<double>(std::unique(diffs.begin(), diffs.end()) - diffs.begin());
    };
    for (const auto& [supp, mus] : groups) {
        std::vector<Site> h(supp.begin(), supp.end());
        for (Site x : supp)
            for (Site d : kHaloSteps) h.push_back({x.x + d.x, x.y + d.y});
        Region halo = make_region(std::move(h));
        double plus = 0.0, minus = 0.0;
        for (const auto& [other, omus] : groups) {
            double same_pos = count_offsets(halo, other);
            double overlap = count_offsets(supp, other);
            plus += omus.first * same_pos + omus.second * overlap;
            minus += omus.second * same_pos + omus.first * overlap;
        }
        neighbourhood[{supp, 1}] = plus;
        neighbourhood[{supp, -1}] = minus;
    }
    rep.all_ok = true;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const Perturbation& p = items[i];
        ConvergenceEntry e;
        e.index = static_cast<int>(i);
        e.weight = std::pow(t, p.norm) * std::exp(u * p.wall);
        e.mu = std::pow(rep.s, p.norm);
        e.neighbourhood = neighbourhood[{p.support(), p.sign()}];
        e.ratio = e.weight / (e.mu * std::exp(-e.neighbourhood));
        e.neighbourhood_ok = e.neighbourhood <= std::sqrt(rep.s) * static_cast<double>(p.support().size());
        rep.worst_ratio = std::max(rep.worst_ratio, e.ratio);
        if (!(e.ratio <= 1.0) || !e.neighbourhood_ok) rep.all_ok = false;
        rep.entries.push_back(e);
    }
    return rep;
}

}  // namespace sos
