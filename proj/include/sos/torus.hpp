#pragma once

#include "sos/clusters.hpp"

namespace sos {

// Polymer gas of catalog perturbations placed on an L x L torus. Only classes whose bounding box
// is narrower than L in both directions are used, so no perturbation wraps around itself.
struct TorusPolymers {
    int period = 0;
    std::vector<Placement> polymers;
    std::vector<int> norms;
    std::vector<int> walls;
};

TorusPolymers torus_polymers(const Catalog& catalog, int period, int max_norm);

// Exact partition function of the polymer gas as a series, through total norm M.
Series torus_partition(const Catalog& catalog, int period, int M);

struct TorusComparison {
    int h = 0, period = 0, N = 0, M = 0;
    Series log_partition_per_site;  // log Z / L^2 through order M
    Series torus_cluster_sum;       // per-site cluster sum on the torus through order M
    Series plane_cluster_sum;       // per-site cluster sum on the plane through order N
    bool series_agree = false;      // log Z / L^2 == torus cluster sum through order M
    bool plane_agrees = false;      // torus and plane sums agree through order N
};

TorusComparison compare_torus(int h, int k, int period, int N, int M);

struct TorusNumeric {
    double t = 0.0, u = 0.0;
    HighFloat log_partition_per_site;  // log Z / L^2 from the order-M brute series
    HighFloat truncated_free_energy;   // f_k(h) through order N
    HighFloat error;                   // |log Z / L^2 + f_k(h)|
    HighFloat bound;                   // 2 t^{N+1}
    bool ok = false;
};

TorusNumeric torus_numeric(const TorusComparison& cmp, double t, double u);

}  // namespace sos
