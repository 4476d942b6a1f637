#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sos/catalog.hpp"
#include "sos/series.hpp"

namespace sos {

enum class Wetting { Partial, Complete, Unresolved };
const char* wetting_name(Wetting w);

// Thresholds on u = 2 beta (J - K) as functions of t = e^{-4 beta J}.
double partial_wetting_threshold(double t);   // above: rho0 > 0
double complete_wetting_threshold(double t);  // below: rho0 = 0

Wetting chalker_classify(double J, double K, double beta);
Wetting chalker_classify_tu(double t, double u);

// K on the partial-wetting boundary at inverse temperature beta.
double partial_boundary_K(double J, double beta);
double complete_boundary_K(double J, double beta);

// Least-squares slope of the partial-wetting boundary K against 1/beta on [lo, hi].
double partial_boundary_slope(double J, double beta_inv_lo, double beta_inv_hi, int points);

struct Window {
    int n = 0;
    double lo = 0.0;
    double hi = 0.0;
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double u) const { return u > lo && u < hi; }
};

std::vector<Window> layering_windows(double t, double epsilon, int n_max);
// Window index containing u, if any.
std::optional<int> window_of(const std::vector<Window>& windows, double u);

struct PhasePoint {
    double J = 1.0, K = 0.0, beta_inv = 0.0, t = 0.0, u = 0.0;
    Wetting chalker = Wetting::Unresolved;
    std::optional<int> window;
    std::optional<int> dominant;  // empty when the series is not evaluated (u > sqrt t)
    HighFloat margin = 0;
    bool at_ceiling = false;      // the minimum sits on h_max, so the level may run higher
    bool trusted = false;         // t below t_1(k)
};

struct ScanSettings {
    double J = 1.0;
    int k = 8;
    int N = 6;
    int h_max = 3;
    double epsilon = 0.5;
    int n_max = 3;
    bool series = true;
};

PhasePoint evaluate_point(double t, double u, const ScanSettings& s);

// Points sorted by (t, u).
std::vector<PhasePoint> scan_tu(const std::vector<double>& ts, const std::vector<double>& us, const ScanSettings& s);
std::vector<PhasePoint> scan_physical(const std::vector<double>& Ks, const std::vector<double>& beta_invs,
                                      const ScanSettings& s);

std::string scan_csv_header();
std::string scan_csv(const std::vector<PhasePoint>& points);
// Classified grid as a static SVG; the overlay adds the tentative-diagram notice.
std::string scan_svg(const std::vector<PhasePoint>& points, bool qualitative_overlay);

enum class CheckStatus { Pass, Fail, NotComputed };
const char* check_status_name(CheckStatus s);

struct CoefficientRow {
    std::string name;
    int h = 0;
    int order = 0;  // t power the value sits at
    Rational expected;
    std::optional<Rational> value;
    CheckStatus status = CheckStatus::NotComputed;
};

struct CoefficientReport {
    int k = 8, N = 7;
    std::vector<CoefficientRow> rows;
    // 0 all pass, 1 some mismatch, 2 something not computed and nothing failed.
    int exit_code() const;
    std::string table() const;
};

using CatalogSource = std::function<Catalog(const CatalogKey&)>;

CoefficientReport verify_coefficients(int k, int N, const CatalogSource& source = {});

}  // namespace sos
