#include "sos/contours.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "sos/clusters.hpp"
#include "sos/error.hpp"

namespace sos {

bool is_large(const Cylinder& c, int k) { return c.diameter > 3 * k + 3; }

std::pair<CylinderSet, CylinderSet> split_large(const CylinderSet& set, int k) {
    CylinderSet large, small;
    large.level = small.level = set.level;
    for (const Cylinder& c : set.cylinders) (is_large(c, k) ? large : small).cylinders.push_back(c);
    return {large, small};
}

namespace {

bool strictly_inside(const Cylinder& inner, const Cylinder& outer) {
    return inner.interior.size() < outer.interior.size() && region_subset(inner.interior, outer.interior);
}

Region minus_all(Region base, const std::vector<const Cylinder*>& holes) {
    for (const Cylinder* h : holes) base = region_difference(base, h->interior);
    return base;
}

// Members of `pool` inside `c` and not inside another such member.
std::vector<const Cylinder*> direct_children(const Cylinder& c, const std::vector<const Cylinder*>& pool) {
    std::vector<const Cylinder*> inside;
    for (const Cylinder* p : pool)
        if (p != &c && strictly_inside(*p, c)) inside.push_back(p);
    std::vector<const Cylinder*> out;
    for (const Cylinder* p : inside) {
        bool covered = false;
        for (const Cylinder* q : inside)
            if (q != p && strictly_inside(*p, *q)) covered = true;
        if (!covered) out.push_back(p);
    }
    return out;
}

std::vector<const Cylinder*> members(const Contour& c) {
    std::vector<const Cylinder*> out{&c.external};
    for (const Cylinder& x : c.intermediate) out.push_back(&x);
    for (const Cylinder& x : c.internal) out.push_back(&x);
    return out;
}

}  // namespace

Region Contour::support() const {
    std::vector<const Cylinder*> holes;
    for (const Cylinder& x : internal) holes.push_back(&x);
    return minus_all(external.interior, holes);
}

Region Contour::external_support() const {
    auto all = members(*this);
    all.erase(all.begin());
    return minus_all(external.interior, all);
}

Region Contour::intermediate_support(std::size_t i) const {
    const Cylinder& c = intermediate.at(i);
    std::vector<const Cylinder*> inside;
    for (const Cylinder* p : members(*this))
        if (p != &c && strictly_inside(*p, c)) inside.push_back(p);
    return minus_all(c.interior, inside);
}

int Contour::norm() const {
    int twice = 0;
    for (const Cylinder* c : members(*this)) twice += c->height() * c->perimeter;
    return twice / 2;
}

CylinderSet Contour::cylinders() const {
    CylinderSet s;
    s.level = level;
    for (const Cylinder* c : members(*this)) s.cylinders.push_back(*c);
    s.canonicalize();
    return s;
}

bool Contour::valid(std::string* why) const {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    if (external.E != level) return fail("external cylinder is not at the contour level");
    auto all = members(*this);
    for (std::size_t i = 1; i < all.size(); ++i) {
        if (!strictly_inside(*all[i], external)) return fail("more than one external cylinder");
        if (all[i]->E == level) return fail("non-external cylinder with E equal to the level");
    }
    for (const Cylinder& x : internal) {
        if (x.I != level) return fail("internal cylinder with I different from the level");
        for (const Cylinder* p : all)
            if (p != &x && strictly_inside(*p, x)) return fail("cylinder inside an internal cylinder");
    }
    for (const Cylinder& x : intermediate)
        if (x.I == level) return fail("intermediate cylinder with I equal to the level");
    // Supp^ext and the Supp^i partition Supp.
    std::vector<Site> pieces = external_support();
    std::size_t total = pieces.size();
    for (std::size_t i = 0; i < intermediate.size(); ++i) {
        Region r = intermediate_support(i);
        total += r.size();
        pieces.insert(pieces.end(), r.begin(), r.end());
    }
    Region merged = make_region(pieces);
    if (merged.size() != total) return fail("support pieces overlap");
    if (merged != support()) return fail("support pieces do not cover the support");
    return true;
}

std::vector<Contour> contour_decompose(const CylinderSet& large, int k) {
    for (const Cylinder& c : large.cylinders)
        if (!is_large(c, k)) throw Error(ErrorCode::NotLargeSet, "set contains an elementary cylinder");
    std::string why;
    if (!is_compatible_set(large, &why)) throw Error(ErrorCode::InvalidArgument, "incompatible set: " + why);
    CylinderSet sorted = large;
    sorted.canonicalize();
    const auto& cyl = sorted.cylinders;
    std::vector<const Cylinder*> pool;
    for (const Cylinder& c : cyl) pool.push_back(&c);
    std::vector<int> parent(cyl.size(), -1);
    for (std::size_t i = 0; i < cyl.size(); ++i)
        for (std::size_t j = 0; j < cyl.size(); ++j)
            if (j != i && strictly_inside(cyl[i], cyl[j]) &&
                (parent[i] < 0 || cyl[j].interior.size() < cyl[parent[i]].interior.size()))
                parent[i] = static_cast<int>(j);
    std::vector<Contour> out;
    for (std::size_t r = 0; r < cyl.size(); ++r) {
        if (parent[r] >= 0 && cyl[parent[r]].I != large.level) continue;
        Contour c;
        c.level = large.level;
        c.external = cyl[r];
        std::vector<std::size_t> stack{r};
        while (!stack.empty()) {
            std::size_t p = stack.back();
            stack.pop_back();
            for (std::size_t i = 0; i < cyl.size(); ++i) {
                if (parent[i] != static_cast<int>(p)) continue;
                if (cyl[i].I == large.level) {
                    c.internal.push_back(cyl[i]);
                } else {
                    c.intermediate.push_back(cyl[i]);
                    stack.push_back(i);
                }
            }
        }
        std::sort(c.intermediate.begin(), c.intermediate.end(), cylinder_order);
        std::sort(c.internal.begin(), c.internal.end(), cylinder_order);
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Site> boundary_vertices(const Region& r) {
    std::vector<Site> out;
    for (Site s : r)
        for (int dy = 0; dy <= 1; ++dy)
            for (int dx = 0; dx <= 1; ++dx) {
                Site v{s.x + dx, s.y + dy};
                int in = 0;
                for (int ey = -1; ey <= 0; ++ey)
                    for (int ex = -1; ex <= 0; ++ex) in += region_contains(r, {v.x + ex, v.y + ey}) ? 1 : 0;
                if (in < 4) out.push_back(v);
            }
    return make_region(std::move(out));
}

namespace {

bool touches(const std::vector<Site>& a, const std::vector<Site>& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return true;
        if (a[i] < b[j])
            ++i;
        else
            ++j;
    }
    return false;
}

}  // namespace

double restricted_partition(const BoundedRegion& region, const ModelParams& params, const ContourSettings& settings) {
    if (region.sites.size() > settings.region_cap)
        throw Error(ErrorCode::RegionTooLarge, "region has " + std::to_string(region.sites.size()) + " sites");
    if (region.sites.empty()) return 1.0;
    if (region.level < 0) throw Error(ErrorCode::InvalidArgument, "negative region level");
    const Catalog& cat = cached_catalog({settings.k, region.level, settings.catalog_order});
    std::vector<Site> outer_v, region_v = boundary_vertices(region.sites);
    if (region.outer) outer_v = boundary_vertices(region.outer->interior);
    std::vector<std::vector<Site>> inner_v;
    for (const Cylinder* c : region.inner) inner_v.push_back(boundary_vertices(c->interior));

    std::vector<Perturbation> placed;
    for (const Perturbation& p : cat.items()) {
        Site anchor = p.support().front();
        for (Site s : region.sites) {
            Perturbation q = p.translated(s.x - anchor.x, s.y - anchor.y);
            if (!region_subset(q.support(), region.sites)) continue;
            std::vector<Site> qv = boundary_vertices(q.support());
            bool ok = true;
            if (region.outer && touches(qv, outer_v) && q.sign() != region.outer->sign()) ok = false;
            for (std::size_t i = 0; ok && i < region.inner.size(); ++i)
                if (touches(qv, inner_v[i]) && q.sign() != -region.inner[i]->sign()) ok = false;
            if (ok) placed.push_back(std::move(q));
        }
    }
    std::size_t n = placed.size();
    std::vector<std::vector<bool>> clash(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            clash[i][j] = clash[j][i] = !perturbations_compatible(placed[i], placed[j]);
    std::vector<double> weight(n);
    for (std::size_t i = 0; i < n; ++i)
        weight[i] = std::exp(placed[i].norm * std::log(params.t) + placed[i].wall * params.u);

    long double total = 0.0L;
    std::vector<std::size_t> chosen;
    std::function<void(std::size_t, int, long double)> walk = [&](std::size_t start, int norm, long double w) {
        total += w;
        for (std::size_t i = start; i < n; ++i) {
            if (norm + placed[i].norm > settings.family_order) continue;
            bool ok = true;
            for (std::size_t c : chosen)
                if (clash[c][i]) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            chosen.push_back(i);
            walk(i + 1, norm + placed[i].norm, w * weight[i]);
            chosen.pop_back();
        }
    };
    walk(0, 0, 1.0L);
    return static_cast<double>(total);
}

ContourWeight contour_weight(const Contour& c, const ModelParams& params, const ContourSettings& settings) {
    auto delta = [](int level) { return level == 0 ? 1.0 : 0.0; };
    std::vector<const Cylinder*> all = members(c);

    BoundedRegion ext{c.external_support(), c.external.I, &c.external, direct_children(c.external, all)};
    std::vector<const Cylinder*> internal;
    for (const Cylinder& x : c.internal) internal.push_back(&x);
    BoundedRegion whole{c.support(), c.level, &c.external, internal};

    double z_ext = restricted_partition(ext, params, settings);
    double z_whole = restricted_partition(whole, params, settings);
    double log_ratio = std::log(z_ext) - std::log(z_whole);
    double log_prefactor = params.u * (delta(ext.level) * ext.sites.size() - delta(whole.level) * whole.sites.size());
    for (std::size_t i = 0; i < c.intermediate.size(); ++i) {
        const Cylinder& g = c.intermediate[i];
        BoundedRegion piece{c.intermediate_support(i), g.I, &g, direct_children(g, all)};
        log_ratio += std::log(restricted_partition(piece, params, settings));
        log_prefactor += params.u * delta(piece.level) * piece.sites.size();
    }
    double log_cylinders = 0.0;
    for (const Cylinder* g : all) log_cylinders += std::log(cylinder_weight(*g, params));

    ContourWeight w;
    w.product_form = std::exp(log_cylinders + log_ratio);
    w.power_form = std::exp(c.norm() * std::log(params.t) + log_prefactor + log_ratio);
    w.relative_gap = std::abs(w.product_form - w.power_form) / std::max(w.product_form, w.power_form);
    return w;
}

}  // namespace sos
