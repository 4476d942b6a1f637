#pragma once

#include <utility>
#include <vector>

#include "sos/catalog.hpp"
#include "sos/geometry.hpp"
#include "sos/lattice.hpp"

namespace sos {

bool is_large(const Cylinder& c, int k);

// (large cylinders, elementary remainder); both keep the level of the input.
std::pair<CylinderSet, CylinderSet> split_large(const CylinderSet& set, int k);

struct Contour {
    int level = 0;
    Cylinder external;
    std::vector<Cylinder> intermediate;  // neither external nor with I = level
    std::vector<Cylinder> internal;      // I = level, nothing of the contour inside

    Region support() const;
    Region external_support() const;
    Region intermediate_support(std::size_t i) const;
    // Half the number of vertical plaquettes.
    int norm() const;
    CylinderSet cylinders() const;
    bool valid(std::string* why = nullptr) const;
};

// Canonical decomposition of a set of large cylinders into contours, sorted by external cylinder.
std::vector<Contour> contour_decompose(const CylinderSet& large, int k);

struct ContourSettings {
    int k = 1;
    int catalog_order = 4;  // elementary perturbations of norm at most this
    int family_order = 6;   // total norm cap of a family in Z*
    std::size_t region_cap = 30;
};

// A region with the cylinders bounding it: `outer` encloses it and every `inner` sits inside.
struct BoundedRegion {
    Region sites;
    int level = 0;
    const Cylinder* outer = nullptr;
    std::vector<const Cylinder*> inner;
};

// Z*: compatible families of elementary perturbations inside the region obeying the sign condition
// against the bounding cylinders whose perimeters they touch.
double restricted_partition(const BoundedRegion& region, const ModelParams& params, const ContourSettings& settings);

struct ContourWeight {
    double product_form = 0.0;  // cylinder weights times ratio of Z*
    double power_form = 0.0;    // t^norm times ratio of Z~ = e^{u delta |region|} Z*
    double relative_gap = 0.0;
};

ContourWeight contour_weight(const Contour& c, const ModelParams& params, const ContourSettings& settings);

// Vertices of the dual lattice lying on the boundary of a region.
std::vector<Site> boundary_vertices(const Region& r);

}  // namespace sos
