#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "sos/lattice.hpp"

namespace sos {

struct Site {
    int x = 0;
    int y = 0;
    auto operator<=>(const Site&) const = default;
};

inline std::int64_t site_key(Site s) {
    return (static_cast<std::int64_t>(s.x) << 32) ^ static_cast<std::uint32_t>(s.y);
}

// Sorted, duplicate-free set of lattice sites.
using Region = std::vector<Site>;

Region make_region(std::vector<Site> sites);
bool region_contains(const Region& r, Site s);
bool region_subset(const Region& a, const Region& b);
bool region_disjoint(const Region& a, const Region& b);
Region region_translate(const Region& r, int dx, int dy);
Region region_union(const Region& a, const Region& b);
Region region_difference(const Region& a, const Region& b);

// Directions double as arm labels at a dual vertex.
enum Dir : int { East = 0, North = 1, West = 2, South = 3 };
constexpr unsigned arm_bit(int d) { return 1u << d; }
constexpr unsigned kArmsSW = arm_bit(South) | arm_bit(West);
constexpr unsigned kArmsNE = arm_bit(North) | arm_bit(East);

// Dual vertex (x, y) is the lower-left corner of site (x, y).
struct Loop {
    std::vector<Site> vertices;

    std::size_t length() const { return vertices.size(); }
    long twice_signed_area() const;
    Region enclosed() const;
    int l1_diameter() const;
};

// Bitmap membership on a window; everything outside reads as `outside`.
class Grid {
public:
    Grid(int x0, int y0, int width, int height, bool outside = false);
    bool get(int x, int y) const;
    void set(int x, int y, bool v);
    int x0() const { return x0_; }
    int y0() const { return y0_; }
    int width() const { return w_; }
    int height() const { return h_; }
    bool outside() const { return outside_; }

private:
    int x0_, y0_, w_, h_;
    bool outside_;
    std::vector<std::uint8_t> cells_;
};

// Boundary loops of the "true" set, oriented with that set on the left,
// self-touching vertices resolved south-west / north-east.
std::vector<Loop> trace_boundary(const Grid& grid);

// Arms of the boundary of `r` at dual vertex v.
unsigned boundary_arms(const Region& r, Site v);

class BasePerimeter {
public:
    // Throws InvalidArgument unless the region's boundary is one closed curve after rounding.
    static BasePerimeter from_region(const Region& interior);
    static bool is_valid_base(const Region& interior);

    const Loop& loop() const { return loop_; }
    const Region& interior() const { return interior_; }
    int length() const { return static_cast<int>(loop_.length()); }
    int l1_diameter() const { return diameter_; }

private:
    Loop loop_;
    Region interior_;
    int diameter_ = 0;
};

struct Cylinder {
    Region interior;
    int E = 0;
    int I = 0;
    int perimeter = 0;
    int diameter = 0;

    Cylinder() = default;
    Cylinder(Region interior, int exterior_level, int interior_level);
    // Caller vouches for the base; perimeter and diameter supplied.
    static Cylinder trusted(Region interior, int E, int I, int perimeter, int diameter);

    int sign() const { return I > E ? 1 : -1; }
    int height() const { return I > E ? I - E : E - I; }
    bool operator==(const Cylinder& o) const {
        return E == o.E && I == o.I && interior == o.interior;
    }
};

bool cylinder_order(const Cylinder& a, const Cylinder& b);

// Perimeters share a dual bond or meet at a vertex not resolved by rounding.
bool perimeters_intersect(const Region& a, const Region& b);

bool compatible(const Cylinder& a, const Cylinder& b);
bool separated(const Cylinder& first, const Cylinder& second, const Cylinder& by);

struct CylinderSet {
    std::vector<Cylinder> cylinders;
    int level = 0;

    void canonicalize();
    bool operator==(const CylinderSet& o) const {
        return level == o.level && cylinders == o.cylinders;
    }
};

bool is_compatible_set(const CylinderSet& set, std::string* why = nullptr);
// Indices of cylinders not contained in another cylinder's interior.
std::vector<std::size_t> external_indices(const CylinderSet& set);

CylinderSet decompose(const HeightConfig& config);
// Decomposition of a height field equal to `background` outside the given window.
CylinderSet decompose_field(const std::vector<int>& heights, int x0, int y0, int width,
                            int height, int background);
HeightConfig reconstruct(const CylinderSet& set, const Box& box);

struct Monomial {
    int t_power = 0;
    int eu_power = 0;
};

Monomial cylinder_monomial(const Cylinder& c);
double cylinder_weight(const Cylinder& c, const ModelParams& params);
double log_total_weight(const CylinderSet& set, const ModelParams& params, std::size_t box_size);
double total_weight(const CylinderSet& set, const ModelParams& params, std::size_t box_size);

// One header line "level n", then one cylinder per line: "E I x y x y ...".
std::string to_debug_text(const CylinderSet& set);
CylinderSet from_debug_text(const std::string& text);

}  // namespace sos
