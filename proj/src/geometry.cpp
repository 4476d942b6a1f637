#include "sos/geometry.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

#include "sos/error.hpp"

namespace sos {

namespace {

constexpr int kDx[4] = {1, 0, -1, 0};
constexpr int kDy[4] = {0, 1, 0, -1};
constexpr int kOpposite[4] = {West, South, East, North};
// Rounding rule: south pairs with west, north with east.
constexpr int kPartner[4] = {North, East, South, West};

}  // namespace

Region make_region(std::vector<Site> sites) {
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    return sites;
}

bool region_contains(const Region& r, Site s) { return std::binary_search(r.begin(), r.end(), s); }

bool region_subset(const Region& a, const Region& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool region_disjoint(const Region& a, const Region& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j)
            ++i;
        else if (*j < *i)
            ++j;
        else
            return false;
    }
    return true;
}

Region region_translate(const Region& r, int dx, int dy) {
    Region out;
    out.reserve(r.size());
    for (Site s : r) out.push_back({s.x + dx, s.y + dy});
    return out;
}

Region region_union(const Region& a, const Region& b) {
    Region out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

Region region_difference(const Region& a, const Region& b) {
    Region out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

long Loop::twice_signed_area() const {
    long area = 0;
    std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Site& a = vertices[i];
        const Site& b = vertices[(i + 1) % n];
        area += static_cast<long>(a.x) * b.y - static_cast<long>(b.x) * a.y;
    }
    return area;
}

Region Loop::enclosed() const {
    std::map<int, std::vector<int>> columns_by_row;
    std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Site& a = vertices[i];
        const Site& b = vertices[(i + 1) % n];
        if (a.x == b.x) columns_by_row[std::min(a.y, b.y)].push_back(a.x);
    }
    Region out;
    for (auto& [row, cols] : columns_by_row) {
        std::sort(cols.begin(), cols.end());
        for (std::size_t k = 0; k + 1 < cols.size(); k += 2)
            for (int x = cols[k]; x < cols[k + 1]; ++x) out.push_back({x, row});
    }
    return make_region(std::move(out));
}

int Loop::l1_diameter() const {
    if (vertices.empty()) return 0;
    int smin = INT_MAX, smax = INT_MIN, dmin = INT_MAX, dmax = INT_MIN;
    for (const Site& v : vertices) {
        smin = std::min(smin, v.x + v.y);
        smax = std::max(smax, v.x + v.y);
        dmin = std::min(dmin, v.x - v.y);
        dmax = std::max(dmax, v.x - v.y);
    }
    return std::max(smax - smin, dmax - dmin);
}

Grid::Grid(int x0, int y0, int width, int height, bool outside)
    : x0_(x0), y0_(y0), w_(width), h_(height), outside_(outside),
      cells_(static_cast<std::size_t>(width) * height, outside ? 1 : 0) {}

bool Grid::get(int x, int y) const {
    int i = x - x0_, j = y - y0_;
    if (i < 0 || j < 0 || i >= w_ || j >= h_) return outside_;
    return cells_[static_cast<std::size_t>(j) * w_ + i] != 0;
}

void Grid::set(int x, int y, bool v) {
    int i = x - x0_, j = y - y0_;
    if (i < 0 || j < 0 || i >= w_ || j >= h_) throw Error(ErrorCode::Internal, "grid write out of range");
    cells_[static_cast<std::size_t>(j) * w_ + i] = v ? 1 : 0;
}

std::vector<Loop> trace_boundary(const Grid& grid) {
    // Outgoing directed boundary edges per vertex, as a 4-bit mask.
    std::unordered_map<std::int64_t, unsigned> out;
    auto add = [&](int vx, int vy, int d) { out[site_key({vx, vy})] |= arm_bit(d); };
    for (int y = grid.y0() - 1; y <= grid.y0() + grid.height(); ++y) {
        for (int x = grid.x0() - 1; x <= grid.x0() + grid.width(); ++x) {
            if (!grid.get(x, y)) continue;
            if (!grid.get(x, y - 1)) add(x, y, East);
            if (!grid.get(x + 1, y)) add(x + 1, y, North);
            if (!grid.get(x, y + 1)) add(x + 1, y + 1, West);
            if (!grid.get(x - 1, y)) add(x, y + 1, South);
        }
    }
    std::vector<std::pair<Site, unsigned>> starts;
    starts.reserve(out.size());
    for (auto& [key, mask] : out)
        starts.push_back({{static_cast<int>(key >> 32), static_cast<int>(static_cast<std::int32_t>(key))}, mask});
    std::sort(starts.begin(), starts.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::unordered_map<std::int64_t, unsigned> used;
    std::vector<Loop> loops;
    for (auto& [v0, mask0] : starts) {
        for (int d0 = 0; d0 < 4; ++d0) {
            if (!(mask0 & arm_bit(d0))) continue;
            if (used[site_key(v0)] & arm_bit(d0)) continue;
            Loop loop;
            Site v = v0;
            int d = d0;
            for (;;) {
                loop.vertices.push_back(v);
                used[site_key(v)] |= arm_bit(d);
                v = {v.x + kDx[d], v.y + kDy[d]};
                unsigned m = out[site_key(v)];
                int arrival = kOpposite[d];
                int next = std::popcount(m) == 1 ? std::countr_zero(m) : kPartner[arrival];
                if (!(m & arm_bit(next))) throw Error(ErrorCode::Internal, "boundary tracing lost its path");
                if (v == v0 && next == d0) break;
                d = next;
            }
            loops.push_back(std::move(loop));
        }
    }
    return loops;
}

unsigned boundary_arms(const Region& r, Site v) {
    bool sw = region_contains(r, {v.x - 1, v.y - 1});
    bool se = region_contains(r, {v.x, v.y - 1});
    bool nw = region_contains(r, {v.x - 1, v.y});
    bool ne = region_contains(r, {v.x, v.y});
    unsigned m = 0;
    if (nw != sw) m |= arm_bit(West);
    if (ne != se) m |= arm_bit(East);
    if (nw != ne) m |= arm_bit(North);
    if (sw != se) m |= arm_bit(South);
    return m;
}

namespace {

Grid region_grid(const Region& r) {
    int xmin = INT_MAX, ymin = INT_MAX, xmax = INT_MIN, ymax = INT_MIN;
    for (Site s : r) {
        xmin = std::min(xmin, s.x);
        ymin = std::min(ymin, s.y);
        xmax = std::max(xmax, s.x);
        ymax = std::max(ymax, s.y);
    }
    Grid g(xmin, ymin, xmax - xmin + 1, ymax - ymin + 1, false);
    for (Site s : r) g.set(s.x, s.y, true);
    return g;
}

Loop canonical_loop(Loop loop) {
    if (loop.twice_signed_area() < 0) std::reverse(loop.vertices.begin(), loop.vertices.end());
    auto& v = loop.vertices;
    std::size_t n = v.size();
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Site& a = v[(i + k) % n];
            const Site& b = v[(best + k) % n];
            if (a < b) {
                best = i;
                break;
            }
            if (b < a) break;
        }
    }
    std::rotate(v.begin(), v.begin() + static_cast<long>(best), v.end());
    return loop;
}

}  // namespace

bool BasePerimeter::is_valid_base(const Region& interior) {
    if (interior.empty()) return false;
    return trace_boundary(region_grid(interior)).size() == 1;
}

BasePerimeter BasePerimeter::from_region(const Region& interior) {
    if (interior.empty()) throw Error(ErrorCode::InvalidArgument, "empty cylinder base");
    auto loops = trace_boundary(region_grid(interior));
    if (loops.size() != 1)
        throw Error(ErrorCode::InvalidArgument, "region boundary is not a single closed curve");
    BasePerimeter p;
    p.loop_ = canonical_loop(std::move(loops[0]));
    p.interior_ = interior;
    p.diameter_ = p.loop_.l1_diameter();
    return p;
}

Cylinder::Cylinder(Region r, int exterior_level, int interior_level)
    : interior(std::move(r)), E(exterior_level), I(interior_level) {
    if (E == I || E < 0 || I < 0)
        throw Error(ErrorCode::InvalidArgument, "cylinder levels must be distinct and nonnegative");
    interior = make_region(std::move(interior));
    BasePerimeter p = BasePerimeter::from_region(interior);
    perimeter = p.length();
    diameter = p.l1_diameter();
}

Cylinder Cylinder::trusted(Region interior, int E, int I, int perimeter, int diameter) {
    Cylinder c;
    c.interior = std::move(interior);
    c.E = E;
    c.I = I;
    c.perimeter = perimeter;
    c.diameter = diameter;
    return c;
}

bool cylinder_order(const Cylinder& a, const Cylinder& b) {
    if (a.interior.size() != b.interior.size()) return a.interior.size() > b.interior.size();
    if (a.interior != b.interior) return a.interior < b.interior;
    if (a.E != b.E) return a.E < b.E;
    return a.I < b.I;
}

bool perimeters_intersect(const Region& a, const Region& b) {
    for (Site s : a) {
        for (int dx = 0; dx <= 1; ++dx) {
            for (int dy = 0; dy <= 1; ++dy) {
                Site v{s.x + dx, s.y + dy};
                unsigned ma = boundary_arms(a, v);
                if (!ma) continue;
                unsigned mb = boundary_arms(b, v);
                if (!mb) continue;
                if (ma & mb) return true;
                bool resolved = (ma == kArmsSW && mb == kArmsNE) || (ma == kArmsNE && mb == kArmsSW);
                if (!resolved) return true;
            }
        }
    }
    return false;
}

bool compatible(const Cylinder& a, const Cylinder& b) {
    if (a.interior == b.interior) return false;
    bool disjoint = region_disjoint(a.interior, b.interior);
    bool a_in_b = !disjoint && region_subset(a.interior, b.interior);
    bool b_in_a = !disjoint && !a_in_b && region_subset(b.interior, a.interior);
    if (!disjoint && !a_in_b && !b_in_a) return false;
    if (a.sign() == b.sign()) {
        if (disjoint && perimeters_intersect(a.interior, b.interior)) return false;
    } else {
        if (!disjoint && perimeters_intersect(a.interior, b.interior)) return false;
    }
    if (disjoint) return a.E == b.E;
    if (a_in_b) return a.E == b.I;
    return a.I == b.E;
}

bool separated(const Cylinder& first, const Cylinder& second, const Cylinder& by) {
    const Region& g1 = first.interior;
    const Region& g2 = second.interior;
    const Region& g = by.interior;
    if (g1 == g || g2 == g) return false;
    bool g1_in = region_subset(g1, g);
    bool g2_in = region_subset(g2, g);
    bool g_in_g1 = region_subset(g, g1);
    bool g_in_g2 = region_subset(g, g2);
    if (g1_in && g_in_g2) return true;
    if (g2_in && g_in_g1) return true;
    if (g1_in && region_disjoint(g2, g)) return true;
    if (g2_in && region_disjoint(g1, g)) return true;
    return false;
}

void CylinderSet::canonicalize() { std::sort(cylinders.begin(), cylinders.end(), cylinder_order); }

bool is_compatible_set(const CylinderSet& set, std::string* why) {
    const auto& cs = set.cylinders;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        for (std::size_t j = i + 1; j < cs.size(); ++j) {
            if (compatible(cs[i], cs[j])) continue;
            bool exempt = false;
            for (std::size_t k = 0; k < cs.size() && !exempt; ++k)
                if (k != i && k != j && separated(cs[i], cs[j], cs[k])) exempt = true;
            if (!exempt) {
                if (why) *why = "cylinders " + std::to_string(i) + " and " + std::to_string(j) + " are incompatible";
                return false;
            }
        }
    }
    for (std::size_t i : external_indices(set)) {
        if (cs[i].E != set.level) {
            if (why) *why = "external cylinder " + std::to_string(i) + " does not start at the boundary level";
            return false;
        }
    }
    return true;
}

std::vector<std::size_t> external_indices(const CylinderSet& set) {
    const auto& cs = set.cylinders;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        bool inside = false;
        for (std::size_t j = 0; j < cs.size() && !inside; ++j)
            if (j != i && cs[i].interior.size() <= cs[j].interior.size() && cs[i].interior != cs[j].interior &&
                region_subset(cs[i].interior, cs[j].interior))
                inside = true;
        if (!inside) out.push_back(i);
    }
    return out;
}

CylinderSet decompose_field(const std::vector<int>& heights, int x0, int y0, int width, int height,
                            int background) {
    CylinderSet set;
    set.level = background;
    int lo = background, hi = background;
    for (int h : heights) {
        lo = std::min(lo, h);
        hi = std::max(hi, h);
    }
    struct Run {
        std::vector<int> levels;
        int perimeter = 0;
        int diameter = 0;
    };
    // Keyed by (sign, interior); the level lists become stacks of equal loops.
    std::map<std::pair<int, Region>, Run> runs;
    for (int j = lo; j < hi; ++j) {
        Grid g(x0, y0, width, height, background > j);
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x)
                g.set(x0 + x, y0 + y, heights[static_cast<std::size_t>(y) * width + x] > j);
        for (Loop& loop : trace_boundary(g)) {
            int sign = loop.twice_signed_area() > 0 ? 1 : -1;
            Run& run = runs[{sign, loop.enclosed()}];
            run.levels.push_back(j);
            run.perimeter = static_cast<int>(loop.length());
            run.diameter = loop.l1_diameter();
        }
    }
    for (auto& [key, run] : runs) {
        auto& lv = run.levels;
        std::sort(lv.begin(), lv.end());
        std::size_t start = 0;
        for (std::size_t i = 1; i <= lv.size(); ++i) {
            if (i < lv.size() && lv[i] == lv[i - 1] + 1) continue;
            int bottom = lv[start];
            int top = lv[i - 1] + 1;
            int E = key.first > 0 ? bottom : top;
            int I = key.first > 0 ? top : bottom;
            set.cylinders.push_back(Cylinder::trusted(key.second, E, I, run.perimeter, run.diameter));
            start = i;
        }
    }
    set.canonicalize();
    return set;
}

CylinderSet decompose(const HeightConfig& config) {
    config.validate();
    return decompose_field(config.heights, 0, 0, config.box.width, config.box.height, config.box.boundary);
}

HeightConfig reconstruct(const CylinderSet& set, const Box& box) {
    if (set.level != box.boundary)
        throw Error(ErrorCode::IncompatibleSet, "set level differs from the box boundary level");
    std::string why;
    if (!is_compatible_set(set, &why)) throw Error(ErrorCode::IncompatibleSet, why);
    CylinderSet ordered = set;
    ordered.canonicalize();
    std::vector<long> h(box.size(), box.boundary);
    for (const Cylinder& c : ordered.cylinders) {
        for (Site s : c.interior) {
            if (!box.contains(s.x, s.y))
                throw Error(ErrorCode::InvalidArgument, "cylinder interior leaves the box");
            h[box.index(s.x, s.y)] += c.I - c.E;
        }
    }
    HeightConfig out(box);
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i] < 0) throw Error(ErrorCode::NegativeHeight, "nesting drives a height below zero");
        out.heights[i] = static_cast<int>(h[i]);
    }
    return out;
}

Monomial cylinder_monomial(const Cylinder& c) {
    Monomial m;
    m.t_power = c.height() * c.perimeter / 2;
    m.eu_power = static_cast<int>(c.interior.size()) * ((c.I == 0 ? 1 : 0) - (c.E == 0 ? 1 : 0));
    return m;
}

double cylinder_weight(const Cylinder& c, const ModelParams& params) {
    Monomial m = cylinder_monomial(c);
    return std::exp(m.t_power * std::log(params.t) + m.eu_power * params.u);
}

double log_total_weight(const CylinderSet& set, const ModelParams& params, std::size_t box_size) {
    double lw = set.level == 0 ? params.u * static_cast<double>(box_size) : 0.0;
    for (const Cylinder& c : set.cylinders) {
        Monomial m = cylinder_monomial(c);
        lw += m.t_power * std::log(params.t) + m.eu_power * params.u;
    }
    return lw;
}

double total_weight(const CylinderSet& set, const ModelParams& params, std::size_t box_size) {
    return std::exp(log_total_weight(set, params, box_size));
}

std::string to_debug_text(const CylinderSet& set) {
    CylinderSet s = set;
    s.canonicalize();
    std::ostringstream os;
    os << "level " << s.level << '\n';
    for (const Cylinder& c : s.cylinders) {
        os << c.E << ' ' << c.I;
        for (Site x : c.interior) os << ' ' << x.x << ' ' << x.y;
        os << '\n';
    }
    return os.str();
}

CylinderSet from_debug_text(const std::string& text) {
    std::istringstream is(text);
    std::string word;
    CylinderSet set;
    if (!(is >> word >> set.level) || word != "level")
        throw Error(ErrorCode::ParseError, "cylinder text must start with 'level n'");
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        int E, I;
        if (!(ls >> E >> I)) throw Error(ErrorCode::ParseError, "bad cylinder line: " + line);
        std::vector<Site> sites;
        int x, y;
        while (ls >> x >> y) sites.push_back({x, y});
        if (!ls.eof()) throw Error(ErrorCode::ParseError, "bad site list: " + line);
        set.cylinders.emplace_back(make_region(std::move(sites)), E, I);
    }
    set.canonicalize();
    return set;
}

}  // namespace sos
