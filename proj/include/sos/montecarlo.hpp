#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sos/lattice.hpp"

namespace sos {

// Counter-based generator: every draw is a pure function of (seed, sweep, site, lane).
struct CounterRng {
    std::uint64_t seed = 0;
    static std::uint64_t mix(std::uint64_t x);
    std::uint64_t bits(std::uint64_t sweep, std::uint64_t site, std::uint64_t lane = 0) const;
    // Uniform in [0, 1) with 53 random bits.
    double uniform(std::uint64_t sweep, std::uint64_t site, std::uint64_t lane = 0) const;
};

enum class Sampler { HeatBath, Metropolis };

struct ChainConfig {
    Box box;
    ModelParams params;
    long sweeps = 10000;
    long burn_in = 1000;
    int thin = 1;
    std::uint64_t seed = 1;
    Sampler sampler = Sampler::HeatBath;
    int height_cap = 0;   // 0: unbounded; otherwise heights stay in 0..height_cap
    int z_max = 4;        // rho_z and the histogram are reported for z = 0..z_max
    int batches = 50;

    void validate() const;
};

// Largest height above the highest neighbour that the heat bath considers; omitted mass < 1e-14.
int heat_bath_tail(double t);

// Conditional weights of heights 0..H at site (x, y), relative to the largest one.
std::vector<double> site_conditional(const HeightConfig& config, int x, int y, const ModelParams& params,
                                     int height_cap = 0);

// One exact draw from the single-site conditional given a uniform number.
int heat_bath_site(const HeightConfig& config, int x, int y, const ModelParams& params, double uniform,
                   int height_cap = 0);

struct Estimate {
    double mean = 0.0;
    double se = 0.0;
};

struct ObservableSet {
    long samples = 0;
    Estimate rho0;
    std::vector<Estimate> rho_z;            // cumulative, z = 0..z_max
    std::vector<Estimate> level_histogram;  // z = 0..z_max, then one bin for heights above z_max
    int majority_level = 0;
    Estimate not_at_n;
    std::vector<double> site_rho0;          // per-site <delta(phi_x)>
};

struct ChainState {
    HeightConfig config;
    long sweep = 0;
};

// One checkerboard sweep, even sites then odd sites.
void sweep_once(ChainState& state, const ChainConfig& chain);

ObservableSet run_chain(const ChainConfig& chain);

// Estimated rho0 at least half of t^{2n}; `converged` is false when the error bar is too wide to tell.
struct LowerBoundCheck {
    bool holds = false;
    bool converged = false;
    double bound = 0.0;
};
LowerBoundCheck rho_lower_bound_check(int n, const ObservableSet& obs, double t);

std::string csv_header(int z_max);
std::string csv_row(const ChainConfig& chain, const ObservableSet& obs);

// Exact values of the same observables (per-site averages) from the enumeration oracle.
struct ExactObservables {
    double rho0 = 0.0;
    std::vector<double> rho_z;
    std::vector<double> level_histogram;
    double not_at_n = 0.0;
};
ExactObservables exact_observables(const Box& box, const ModelParams& params, int height_cap, int z_max,
                                   bool check_cap);

}  // namespace sos
