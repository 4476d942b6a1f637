#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace sos {

// Canonical parameterization is (t, u); J only matters when converting to (K, beta).
struct ModelParams {
    double t = 0.0;
    double u = 0.0;
    double J = 1.0;

    static ModelParams from_tu(double t, double u, double J = 1.0);
    static ModelParams from_physical(double J, double K, double beta);

    double beta() const;
    double K() const;
    double s() const;
    // 2*beta*J, the cost of one vertical plaquette: -ln(t)/2.
    double plaquette_cost() const;
};

struct Box {
    int width = 0;
    int height = 0;
    int boundary = 0;

    std::size_t size() const { return static_cast<std::size_t>(width) * height; }
    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
};

struct HeightConfig {
    Box box;
    std::vector<int> heights;

    HeightConfig() = default;
    explicit HeightConfig(const Box& b) : box(b), heights(b.size(), b.boundary) {}
    HeightConfig(const Box& b, std::vector<int> h);

    // Height at any lattice site; sites outside the box sit at the boundary level.
    int at(int x, int y) const { return box.contains(x, y) ? heights[box.index(x, y)] : box.boundary; }
    int& ref(int x, int y) { return heights[box.index(x, y)]; }
    void validate() const;
    bool operator==(const HeightConfig& o) const {
        return box.width == o.box.width && box.height == o.box.height &&
               box.boundary == o.box.boundary && heights == o.heights;
    }
};

struct ExactOracleSettings {
    int height_cap = 4;
    double cap_tolerance = 1e-10;  // infinity skips the check and targets the capped measure
};

// beta*H with boundary bonds counted once.
double energy(const HeightConfig& config, const ModelParams& params);

// The same energy computed from the unit-cube surface: 2bJ(|I|-|Lambda|) - u|I cap W|.
double energy_cylinder_form(const HeightConfig& config, const ModelParams& params);

struct PartitionResult {
    double value = 0.0;
    double log_value = 0.0;
};

PartitionResult exact_partition(const Box& box, const ModelParams& params,
                                const ExactOracleSettings& settings);

using Observable = std::function<double(const HeightConfig&)>;
using VectorObservable = std::function<void(const HeightConfig&, double* out)>;

double exact_expectation(const Box& box, const ModelParams& params,
                         const ExactOracleSettings& settings, const Observable& obs);

// Several observables in one enumeration pass.
std::vector<double> exact_expectations(const Box& box, const ModelParams& params,
                                       const ExactOracleSettings& settings,
                                       const VectorObservable& obs, std::size_t count);

}  // namespace sos
