#include "sos/catalog.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include "sos/error.hpp"

namespace sos {

Perturbation Perturbation::translated(int dx, int dy) const {
    Perturbation p = *this;
    for (Cylinder& c : p.cylinders) c.interior = region_translate(c.interior, dx, dy);
    return p;
}

int Perturbation::height_at(Site s) const {
    int h = level;
    for (const Cylinder& c : cylinders)
        if (region_contains(c.interior, s)) h += c.I - c.E;
    return h;
}

Perturbation Perturbation::canonical() const {
    Site least = support().front();
    return translated(-least.x, -least.y);
}

Perturbation make_perturbation(std::vector<Cylinder> cylinders) {
    if (cylinders.empty()) throw Error(ErrorCode::InvalidArgument, "a perturbation needs at least one cylinder");
    CylinderSet set;
    set.cylinders = std::move(cylinders);
    set.canonicalize();
    auto ext = external_indices(set);
    if (ext.size() != 1) throw Error(ErrorCode::InvalidArgument, "a perturbation has exactly one external cylinder");
    set.level = set.cylinders[ext[0]].E;
    std::string why;
    if (!is_compatible_set(set, &why)) throw Error(ErrorCode::IncompatibleSet, why);
    Perturbation p;
    p.level = set.level;
    p.cylinders = std::move(set.cylinders);
    int twice = 0;
    for (const Cylinder& c : p.cylinders) {
        twice += c.height() * c.perimeter;
        p.wall += cylinder_monomial(c).eu_power;
    }
    if (twice % 2) throw Error(ErrorCode::Internal, "odd plaquette count");
    p.norm = twice / 2;
    return p;
}

Catalog::Catalog(CatalogKey key, std::vector<Perturbation> items) : key_(key), items_(std::move(items)) {}

long Catalog::count(int norm, int wall) const {
    long n = 0;
    for (const Perturbation& p : items_)
        if (p.norm == norm && p.wall == wall) ++n;
    return n;
}

std::map<std::pair<int, int>, long> Catalog::histogram() const {
    std::map<std::pair<int, int>, long> out;
    for (const Perturbation& p : items_) ++out[{p.norm, p.wall}];
    return out;
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string catalog_body(const std::vector<Perturbation>& items) {
    std::ostringstream os;
    for (const Perturbation& p : items) {
        os << "p " << p.norm << ' ' << p.wall << ' ' << p.cylinders.size() << '\n';
        for (const Cylinder& c : p.cylinders) {
            os << "c " << c.E << ' ' << c.I << ' ' << c.perimeter << ' ' << c.diameter << ' '
               << c.interior.size();
            for (Site s : c.interior) os << ' ' << s.x << ' ' << s.y;
            os << '\n';
        }
    }
    return os.str();
}

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

}  // namespace

std::uint64_t Catalog::content_hash() const { return fnv1a(catalog_body(items_)); }

std::string Catalog::serialize() const {
    std::string body = catalog_body(items_);
    std::ostringstream os;
    os << "sos-catalog 1\n";
    os << "key " << key_.k << ' ' << key_.h << ' ' << key_.N << '\n';
    os << "count " << items_.size() << '\n';
    os << "hash " << hex64(fnv1a(body)) << '\n';
    os << body;
    return os.str();
}

Catalog Catalog::deserialize(const std::string& text) {
    std::istringstream is(text);
    std::string line, word;
    auto fail = [](const std::string& why) { return Error(ErrorCode::IoError, "catalog file: " + why); };
    std::getline(is, line);
    if (line != "sos-catalog 1") throw fail("unknown header");
    CatalogKey key;
    std::size_t count = 0;
    std::string hash;
    if (!(is >> word >> key.k >> key.h >> key.N) || word != "key") throw fail("missing key line");
    if (!(is >> word >> count) || word != "count") throw fail("missing count line");
    if (!(is >> word >> hash) || word != "hash") throw fail("missing hash line");
    std::getline(is, line);
    std::string body((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    if (hex64(fnv1a(body)) != hash) throw fail("content hash mismatch");
    std::istringstream bs(body);
    std::vector<Perturbation> items;
    items.reserve(count);
    while (bs >> word) {
        if (word != "p") throw fail("expected perturbation record");
        Perturbation p;
        std::size_t ncyl;
        bs >> p.norm >> p.wall >> ncyl;
        for (std::size_t i = 0; i < ncyl; ++i) {
            int E, I, per, diam;
            std::size_t nsites;
            if (!(bs >> word >> E >> I >> per >> diam >> nsites) || word != "c") throw fail("bad cylinder record");
            Region r(nsites);
            for (Site& s : r) bs >> s.x >> s.y;
            p.cylinders.push_back(Cylinder::trusted(std::move(r), E, I, per, diam));
        }
        if (!bs) throw fail("truncated record");
        p.level = p.cylinders.front().E;
        items.push_back(std::move(p));
    }
    if (items.size() != count) throw fail("record count mismatch");
    return Catalog(key, std::move(items));
}

std::string catalog_file_name(const CatalogKey& key) {
    return "catalog_k" + std::to_string(key.k) + "_h" + std::to_string(key.h) + "_N" + std::to_string(key.N) + ".txt";
}

Catalog load_or_build_catalog(const CatalogKey& key, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::path path = fs::path(dir) / catalog_file_name(key);
    if (fs::exists(path)) {
        std::ifstream in(path, std::ios::binary);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        try {
            Catalog c = Catalog::deserialize(text);
            if (c.key().k == key.k && c.key().h == key.h && c.key().N == key.N) return c;
        } catch (const Error&) {
            // Stale or damaged cache files are rebuilt.
        }
    }
    Catalog c = enumerate_catalog(key);
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << c.serialize();
    return c;
}

std::vector<Region> enumerate_bases(int max_perimeter, int max_diameter) {
    std::vector<Region> out;
    int half = max_perimeter / 2;
    for (int w = 1; w < half; ++w) {
        for (int hgt = 1; w + hgt <= half; ++hgt) {
            if (w + hgt > max_diameter) continue;
            unsigned full = (1u << w) - 1;
            std::vector<unsigned> rows(hgt);
            // Rows are filled bottom-up; `cost` counts boundary edges already fixed.
            std::function<void(int, int, unsigned)> rec = [&](int row, int cost, unsigned cover) {
                if (row == hgt) {
                    int total = cost + std::popcount(rows[hgt - 1]);
                    if (total > max_perimeter || cover != full) return;
                    Region r;
                    for (int y = 0; y < hgt; ++y)
                        for (int x = 0; x < w; ++x)
                            if (rows[y] >> x & 1u) r.push_back({x, y});
                    r = make_region(std::move(r));
                    Grid g(0, 0, w, hgt, false);
                    for (Site s : r) g.set(s.x, s.y, true);
                    auto loops = trace_boundary(g);
                    if (loops.size() != 1) return;
                    if (loops[0].l1_diameter() > max_diameter) return;
                    Site least = r.front();
                    out.push_back(region_translate(r, -least.x, -least.y));
                    return;
                }
                for (unsigned m = 1; m <= full; ++m) {
                    int c = cost + std::popcount(m ^ (m << 1));
                    c += row == 0 ? std::popcount(m) : std::popcount(m ^ rows[row - 1]);
                    int remaining = hgt - row - 1;
                    if (c + 2 * remaining + 1 > max_perimeter) continue;
                    rows[row] = m;
                    rec(row + 1, c, cover | m);
                }
            };
            rec(0, 0, 0);
        }
    }
    return out;
}

namespace {

struct BaseSearch {
    const Region& base;
    const CatalogKey& key;
    std::vector<Perturbation>& sink;

    int xmin = 0, ymin = 0, w = 0, hgt = 0;
    std::vector<int> field;                    // window heights, background outside the base
    std::vector<int> cell;                     // window index per base site
    std::vector<std::vector<int>> earlier;     // base neighbours already assigned
    std::vector<int> outside_bonds;            // bonds to the background
    std::vector<int> value;
    int ext_sign = 0;

    void run() {
        int xmax = INT_MIN, ymax = INT_MIN;
        xmin = ymin = INT_MAX;
        for (Site s : base) {
            xmin = std::min(xmin, s.x);
            ymin = std::min(ymin, s.y);
            xmax = std::max(xmax, s.x);
            ymax = std::max(ymax, s.y);
        }
        w = xmax - xmin + 1;
        hgt = ymax - ymin + 1;
        field.assign(static_cast<std::size_t>(w) * hgt, key.h);
        std::size_t n = base.size();
        cell.resize(n);
        earlier.assign(n, {});
        outside_bonds.assign(n, 0);
        value.assign(n, key.h);
        for (std::size_t i = 0; i < n; ++i) {
            Site s = base[i];
            cell[i] = (s.y - ymin) * w + (s.x - xmin);
            const int dx[4] = {1, 0, -1, 0}, dy[4] = {0, 1, 0, -1};
            for (int d = 0; d < 4; ++d) {
                Site nb{s.x + dx[d], s.y + dy[d]};
                auto it = std::lower_bound(base.begin(), base.end(), nb);
                if (it == base.end() || *it != nb)
                    ++outside_bonds[i];
                else if (static_cast<std::size_t>(it - base.begin()) < i)
                    earlier[i].push_back(static_cast<int>(it - base.begin()));
            }
        }
        assign(0, 0);
    }

    void assign(std::size_t i, int cost) {
        if (i == base.size()) {
            finish(cost);
            return;
        }
        int lo = std::max(0, key.h - key.N);
        int hi = key.h + key.N;
        for (int v = lo; v <= hi; ++v) {
            int c = cost + outside_bonds[i] * std::abs(v - key.h);
            for (int j : earlier[i]) c += std::abs(v - value[j]);
            if (c > 2 * key.N) continue;
            int saved_sign = ext_sign;
            if (outside_bonds[i] > 0) {
                // Sites along the external perimeter all sit strictly above or below the level.
                if (v == key.h) continue;
                int s = v > key.h ? 1 : -1;
                if (ext_sign != 0 && s != ext_sign) continue;
                ext_sign = s;
            }
            value[i] = v;
            assign(i + 1, c);
            ext_sign = saved_sign;
        }
    }

    void finish(int cost) {
        for (std::size_t i = 0; i < base.size(); ++i) field[cell[i]] = value[i];
        CylinderSet set = decompose_field(field, xmin, ymin, w, hgt, key.h);
        const auto& cs = set.cylinders;
        if (cs.empty() || cs.front().interior != base) return;
        for (std::size_t i = 1; i < cs.size(); ++i)
            if (!region_subset(cs[i].interior, base) || cs[i].interior == base) return;
        int twice = 0, wall = 0;
        for (const Cylinder& c : cs) {
            if (c.diameter > key.max_diameter()) return;
            twice += c.height() * c.perimeter;
            wall += cylinder_monomial(c).eu_power;
        }
        if (twice != cost) throw Error(ErrorCode::Internal, "plaquette count disagrees with the decomposition");
        Perturbation p;
        p.level = key.h;
        p.norm = twice / 2;
        p.wall = wall;
        p.cylinders = cs;
        sink.push_back(std::move(p));
    }
};

}  // namespace

Catalog enumerate_catalog(const CatalogKey& key) {
    if (key.N > kMaxCatalogOrder)
        throw Error(ErrorCode::OrderTooLarge, "norm cap above " + std::to_string(kMaxCatalogOrder));
    if (key.h < 0 || key.k < 0 || key.N < 0) throw Error(ErrorCode::InvalidArgument, "negative catalog key field");
    std::vector<Perturbation> items;
    if (key.N >= 2) {
        for (const Region& base : enumerate_bases(2 * key.N, key.max_diameter())) {
            BaseSearch search{base, key, items, 0, 0, 0, 0, {}, {}, {}, {}, {}, 0};
            search.run();
        }
    }
    std::stable_sort(items.begin(), items.end(), [](const Perturbation& a, const Perturbation& b) {
        if (a.norm != b.norm) return a.norm < b.norm;
        return a.wall < b.wall;
    });
    return Catalog(key, std::move(items));
}

std::vector<Perturbation> decompose_into_perturbations(const CylinderSet& set, int k) {
    int dmax = 3 * k + 3;
    for (const Cylinder& c : set.cylinders)
        if (c.diameter > dmax) throw Error(ErrorCode::NonElementaryCylinder, "cylinder diameter exceeds 3k+3");
    std::vector<Perturbation> out;
    for (std::size_t e : external_indices(set)) {
        const Cylinder& ext = set.cylinders[e];
        std::vector<Cylinder> members{ext};
        for (std::size_t i = 0; i < set.cylinders.size(); ++i)
            if (i != e && region_subset(set.cylinders[i].interior, ext.interior))
                members.push_back(set.cylinders[i]);
        out.push_back(make_perturbation(std::move(members)));
    }
    return out;
}

bool perturbations_compatible(const Perturbation& a, const Perturbation& b) {
    if (!region_disjoint(a.support(), b.support())) return false;
    if (a.sign() != b.sign()) return true;
    return !perimeters_intersect(a.support(), b.support());
}

Classification classify(const Perturbation& p) {
    Classification c;
    int touching = 0;
    for (const Cylinder& cyl : p.cylinders) {
        if (cyl.I != 0) continue;
        ++touching;
        if (cyl.perimeter <= 6)
            ++c.small_touching;
        else
            ++c.big_touching;
    }
    c.touching = touching > 0;
    c.multi_touching = touching > 1;
    c.simple = p.cylinders.size() == 1 && p.cylinders[0].sign() < 0 && p.cylinders[0].height() == 1;
    return c;
}

bool Tornado::valid() const {
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        const Cylinder& in = chain[i];
        const Cylinder& out = chain[i + 1];
        if (in.interior == out.interior || !region_subset(in.interior, out.interior)) return false;
        if (in.E != out.I) return false;
    }
    return !chain.empty() && chain.back().E == level;
}

bool Tornado::semi_monotone() const {
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
        if (!(chain[i].I < chain[i + 1].I)) return false;
    return true;
}

bool Tornado::fully_monotone() const { return semi_monotone() && !chain.empty() && level > chain.back().I; }

Tornado tornado_at(const Perturbation& p, Site x) {
    if (p.height_at(x) != 0) throw Error(ErrorCode::SiteNotAtZero, "site is not on the wall in this perturbation");
    Tornado t;
    t.level = p.level;
    for (const Cylinder& c : p.cylinders)
        if (region_contains(c.interior, x)) t.chain.push_back(c);
    std::sort(t.chain.begin(), t.chain.end(),
              [](const Cylinder& a, const Cylinder& b) { return a.interior.size() < b.interior.size(); });
    if (t.chain.empty() || t.chain.front().I != 0)
        throw Error(ErrorCode::Internal, "innermost cylinder over a wall site must end on the wall");
    return t;
}

Tornado monotonize(const Tornado& alpha) {
    const auto& ch = alpha.chain;
    std::size_t r = ch.size();
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < r; ++i) {
        bool critical = i + 1 == r;
        if (!critical) {
            int lowest_above = INT_MAX;
            for (std::size_t j = i + 1; j < r; ++j) lowest_above = std::min(lowest_above, ch[j].I);
            critical = ch[i].I < lowest_above;
        }
        if (critical) keep.push_back(i);
    }
    Tornado out;
    out.level = alpha.level;
    for (std::size_t l = 0; l < keep.size(); ++l) {
        const Cylinder& c = ch[keep[l]];
        if (l + 1 == keep.size()) {
            out.chain.push_back(c);
        } else {
            int E = ch[keep[l + 1]].I;
            out.chain.push_back(Cylinder::trusted(c.interior, E, c.I, c.perimeter, c.diameter));
        }
    }
    return out;
}

}  // namespace sos
