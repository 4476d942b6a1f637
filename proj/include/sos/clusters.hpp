#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sos/catalog.hpp"
#include "sos/series.hpp"

namespace sos {

// A perturbation class from a catalog placed at an offset (wrapped on a torus).
struct Placement {
    int cls = 0;
    Site offset;
    auto operator<=>(const Placement&) const = default;
};

struct Cluster {
    std::vector<Placement> occurrences;  // sorted, repeats allowed
    int norm = 0;
    int wall = 0;
    int distinct() const;
};

// Signed count of spanning connected subgraphs of a graph given by its adjacency matrix.
long connected_spanning_signed_count(const std::vector<std::vector<bool>>& adjacency);
// a^T for a graph on the occurrences; `multiplicity_factorial` is X! = prod X(w)!.
Rational truncated_factor(const std::vector<std::vector<bool>>& adjacency, long multiplicity_factorial);

// Cluster enumeration over a fixed catalog, on the plane (period 0) or an L x L torus.
class ClusterEngine {
public:
    ClusterEngine(const Catalog& catalog, int period = 0);

    const Catalog& catalog() const { return catalog_; }
    int period() const { return period_; }
    // Classes that fit the geometry (all of them on the plane).
    const std::vector<int>& classes() const { return classes_; }

    bool incompatible(const Placement& a, const Placement& b) const;
    Rational truncated_factor(const Cluster& x) const;

    // Every cluster containing `root`, with norm at most N, each once.
    void for_each_cluster_containing(const Placement& root, int N,
                                     const std::function<void(const Cluster&)>& visit) const;
    // Every cluster whose support contains `anchor`, each once.
    void for_each_cluster_at(Site anchor, int N, const std::function<void(const Cluster&)>& visit) const;

    // Per-site cluster sum: sum over classes c of sum_{X containing c at its canonical place} phi^T(X)/n(X).
    Series cluster_sum(int N) const;
    // The same quantity through sum_{Supp X containing 0} phi^T(X)/|Supp X|.
    Series anchored_cluster_sum(int N) const;

    std::vector<Site> placed_support(const Placement& p) const;

private:
    Site wrap(Site s) const;
    std::vector<Placement> neighbours(const Placement& p, int budget) const;

    const Catalog& catalog_;
    int period_;
    std::vector<int> classes_;                 // usable class indices sorted by norm
    std::vector<std::vector<Site>> halo_;      // support plus the six sites whose perimeters meet it
};

// Catalog cache shared by the series routines (in-memory, optionally backed by a directory).
const Catalog& cached_catalog(const CatalogKey& key);
void set_catalog_directory(const std::string& dir);

// f_k(h) truncated at order N: -u delta(h) minus the per-site cluster sum.
Series free_energy(int h, int k, int N);
// Per-site cluster sum at level h (f_k(h) = -u delta(h) - this).
Series level_cluster_sum(int h, int k, int N);

struct DifferenceReport {
    int h = 0;
    int order = 0;
    int checked_order = 0;           // template terms are compared up to this t power
    Series difference;               // f_k(h+1) - f_k(h)
    Series template_part;            // the closed form built from extracted pieces
    Series residual;                 // difference - template_part, up to checked_order (empty on success)
    std::map<std::string, Rational> coefficients;  // only those within the order
};

// Throws TemplateMismatch when the residual has terms at or below checked_order.
DifferenceReport free_energy_difference(int h, int k, int N);

// Terms (2j, m) of a level-h sum with m > j^2 / (4 h^2); a wall patch of m sites at depth h costs at least 2h sqrt(m).
std::vector<std::pair<int, int>> isoperimetric_violations(const Series& s, int h);

// Single perturbations with norm 3h+1, two wall plaquettes and an external cylinder off the wall.
long off_wall_double_contacts(int h, int k);
// Single perturbations with norm 2h+1, one wall plaquette and an external cylinder off the wall.
long off_wall_single_contacts(int h, int k);

struct DominanceReport {
    int level = 0;
    std::vector<HighFloat> values;     // f_k(h) for h = 0..h_max
    std::vector<HighFloat> margins;    // f_k(h) - f_k(level)
    HighFloat min_margin = 0;          // smallest margin over h != level
    bool within_convergence_range = false;  // t < t_1(k)
    bool tie = false;
};

double convergence_threshold(int k);  // t_1(k) = (3k+3)^-4

DominanceReport dominant_level(const HighFloat& t, const HighFloat& u, int k, int N, int h_max);
DominanceReport dominant_level(double t, double u, int k, int N, int h_max);

struct ConvergenceEntry {
    int index = 0;
    double weight = 0.0;        // |phi(w)|
    double mu = 0.0;            // phi_{s,0}(w)
    double neighbourhood = 0.0; // sum of mu over perturbations incompatible with w
    double ratio = 0.0;         // |phi| / (mu exp(-neighbourhood))
    bool neighbourhood_ok = false;  // neighbourhood <= s^{1/2} |support|
};

struct ConvergenceReport {
    double t = 0.0, u = 0.0, s = 0.0;
    std::vector<ConvergenceEntry> entries;
    double worst_ratio = 0.0;
    bool all_ok = false;
};

ConvergenceReport convergence_check(const Catalog& catalog, double t, double u);

}  // namespace sos
