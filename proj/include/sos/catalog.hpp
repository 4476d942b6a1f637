#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sos/geometry.hpp"

namespace sos {

struct CatalogKey {
    int k = 8;  // elementary cutoff: base diameter at most 3k+3
    int h = 1;  // external level
    int N = 6;  // cap on the norm
    int max_diameter() const { return 3 * k + 3; }
};

struct Perturbation {
    int level = 0;     // exterior level of the external cylinder
    int norm = 0;      // half the number of vertical plaquettes
    int wall = 0;      // signed count of wall plaquettes gained
    std::vector<Cylinder> cylinders;  // canonical order; the external cylinder comes first

    const Cylinder& external() const { return cylinders.front(); }
    const Region& support() const { return cylinders.front().interior; }
    int sign() const { return cylinders.front().sign(); }

    Perturbation translated(int dx, int dy) const;
    // Height of the perturbed surface at s (the level outside the support).
    int height_at(Site s) const;
    // Translate so the least support site sits at the origin.
    Perturbation canonical() const;
    bool operator==(const Perturbation& o) const { return level == o.level && cylinders == o.cylinders; }
};

// Builds a perturbation from a compatible cylinder set with a single external cylinder.
Perturbation make_perturbation(std::vector<Cylinder> cylinders);

class Catalog {
public:
    Catalog() = default;
    Catalog(CatalogKey key, std::vector<Perturbation> items);

    const CatalogKey& key() const { return key_; }
    const std::vector<Perturbation>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }

    // Translation classes with the given (norm, wall) pair.
    long count(int norm, int wall) const;
    std::map<std::pair<int, int>, long> histogram() const;

    std::string serialize() const;
    static Catalog deserialize(const std::string& text);
    std::uint64_t content_hash() const;

private:
    CatalogKey key_;
    std::vector<Perturbation> items_;
};

// Largest supported norm cap.
constexpr int kMaxCatalogOrder = 10;

Catalog enumerate_catalog(const CatalogKey& key);
// Enumerates, or loads "<dir>/catalog_k<k>_h<h>_N<N>.txt" when present and intact, then writes it.
Catalog load_or_build_catalog(const CatalogKey& key, const std::string& dir);
std::string catalog_file_name(const CatalogKey& key);

// All valid cylinder bases with perimeter at most `max_perimeter` and diameter at most
// `max_diameter`, one per translation class, least site at the origin.
std::vector<Region> enumerate_bases(int max_perimeter, int max_diameter);

std::vector<Perturbation> decompose_into_perturbations(const CylinderSet& set, int k);

bool perturbations_compatible(const Perturbation& a, const Perturbation& b);

struct Classification {
    bool touching = false;
    bool multi_touching = false;
    int small_touching = 0;  // touching cylinders with perimeter <= 6
    int big_touching = 0;    // touching cylinders with perimeter >= 8
    bool simple = false;
};

Classification classify(const Perturbation& p);

struct Tornado {
    int level = 0;                  // exterior level of the outermost cylinder
    std::vector<Cylinder> chain;    // innermost first
    bool semi_monotone() const;
    bool fully_monotone() const;
    bool valid() const;
};

Tornado tornado_at(const Perturbation& p, Site x);
Tornado monotonize(const Tornado& alpha);

}  // namespace sos
