#include "sos/phase.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "sos/clusters.hpp"
#include "sos/error.hpp"
#include "sos/lattice.hpp"

namespace sos {

const char* wetting_name(Wetting w) {
    switch (w) {
        case Wetting::Partial: return "partial_wetting_chalker";
        case Wetting::Complete: return "complete_wetting_chalker";
        default: return "unresolved";
    }
}

double partial_wetting_threshold(double t) {
    double r = std::sqrt(t);
    return -std::log((1.0 - r) / (16.0 * (1.0 + r)));
}

double complete_wetting_threshold(double t) { return -std::log1p(-t * t); }

Wetting chalker_classify_tu(double t, double u) {
    if (!(t > 0.0 && t < 1.0)) throw Error(ErrorCode::ParamsInvalid, "need 0 < t < 1");
    if (u > partial_wetting_threshold(t)) return Wetting::Partial;
    if (u < complete_wetting_threshold(t)) return Wetting::Complete;
    return Wetting::Unresolved;
}

Wetting chalker_classify(double J, double K, double beta) {
    if (!(beta > 0.0) || !(J > 0.0)) throw Error(ErrorCode::ParamsInvalid, "need beta > 0 and J > 0");
    ModelParams p = ModelParams::from_physical(J, K, beta);
    return chalker_classify_tu(p.t, p.u);
}

double partial_boundary_K(double J, double beta) {
    if (!(beta > 0.0) || !(J > 0.0)) throw Error(ErrorCode::ParamsInvalid, "need beta > 0 and J > 0");
    return J - partial_wetting_threshold(std::exp(-4.0 * beta * J)) / (2.0 * beta);
}

double complete_boundary_K(double J, double beta) {
    if (!(beta > 0.0) || !(J > 0.0)) throw Error(ErrorCode::ParamsInvalid, "need beta > 0 and J > 0");
    return J - complete_wetting_threshold(std::exp(-4.0 * beta * J)) / (2.0 * beta);
}

double partial_boundary_slope(double J, double beta_inv_lo, double beta_inv_hi, int points) {
    if (points < 2 || !(beta_inv_lo > 0.0) || !(beta_inv_hi > beta_inv_lo))
        throw Error(ErrorCode::InvalidArgument, "need two or more points on a positive interval");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < points; ++i) {
        double x = beta_inv_lo + (beta_inv_hi - beta_inv_lo) * i / (points - 1);
        double y = partial_boundary_K(J, 1.0 / x);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (points * sxy - sx * sy) / (points * sxx - sx * sx);
}

std::vector<Window> layering_windows(double t, double epsilon, int n_max) {
    if (!(epsilon > 0.0 && epsilon < 2.0)) throw Error(ErrorCode::EpsilonRange, "epsilon must lie in (0, 2)");
    if (!(t > 0.0 && t < 1.0)) throw Error(ErrorCode::ParamsOutOfRange, "need 0 < t < 1");
    if (n_max < 0) throw Error(ErrorCode::InvalidArgument, "n_max must be nonnegative");
    double c = complete_wetting_threshold(t);
    std::vector<Window> out;
    for (int n = 0; n <= n_max; ++n) {
        Window w;
        w.n = n;
        w.lo = c + (2.0 + epsilon) * std::pow(t, n + 3);
        w.hi = n == 0 ? std::sqrt(t) : c + (2.0 - epsilon) * std::pow(t, n + 2);
        out.push_back(w);
    }
    return out;
}

std::optional<int> window_of(const std::vector<Window>& windows, double u) {
    for (const Window& w : windows)
        if (w.contains(u)) return w.n;
    return std::nullopt;
}

PhasePoint evaluate_point(double t, double u, const ScanSettings& s) {
    ModelParams p = ModelParams::from_tu(t, u, s.J);
    PhasePoint pt;
    pt.J = s.J;
    pt.t = t;
    pt.u = u;
    pt.K = p.K();
    pt.beta_inv = 1.0 / p.beta();
    pt.chalker = chalker_classify_tu(t, u);
    pt.window = window_of(layering_windows(t, s.epsilon, s.n_max), u);
    pt.trusted = t < convergence_threshold(s.k);
    if (s.series && u <= std::sqrt(t)) {
        DominanceReport d = dominant_level(t, u, s.k, s.N, s.h_max);
        pt.dominant = d.level;
        pt.margin = d.min_margin;
        pt.at_ceiling = s.h_max > 0 && d.level == s.h_max;
    }
    return pt;
}

namespace {

void sort_points(std::vector<PhasePoint>& pts) {
    std::sort(pts.begin(), pts.end(), [](const PhasePoint& a, const PhasePoint& b) {
        return a.t != b.t ? a.t < b.t : a.u < b.u;
    });
}

}  // namespace

std::vector<PhasePoint> scan_tu(const std::vector<double>& ts, const std::vector<double>& us, const ScanSettings& s) {
    std::vector<PhasePoint> pts;
    for (double t : ts)
        for (double u : us) pts.push_back(evaluate_point(t, u, s));
    sort_points(pts);
    return pts;
}

std::vector<PhasePoint> scan_physical(const std::vector<double>& Ks, const std::vector<double>& beta_invs,
                                      const ScanSettings& s) {
    std::vector<PhasePoint> pts;
    for (double K : Ks)
        for (double bi : beta_invs) {
            if (!(bi > 0.0)) throw Error(ErrorCode::ParamsInvalid, "need beta > 0");
            ModelParams p = ModelParams::from_physical(s.J, K, 1.0 / bi);
            pts.push_back(evaluate_point(p.t, p.u, s));
        }
    sort_points(pts);
    return pts;
}

std::string scan_csv_header() {
    return "t,u,J,K,beta_inv,chalker,window,dominant_level,margin,series_trusted";
}

std::string scan_csv(const std::vector<PhasePoint>& points) {
    std::ostringstream o;
    o << scan_csv_header() << '\n';
    o << std::setprecision(12);
    for (const PhasePoint& p : points) {
        o << p.t << ',' << p.u << ',' << p.J << ',' << p.K << ',' << p.beta_inv << ',' << wetting_name(p.chalker)
          << ',' << (p.window ? "layer_" + std::to_string(*p.window) : std::string("none")) << ',';
        if (p.dominant)
            o << *p.dominant << (p.at_ceiling ? "+" : "") << ',' << std::setprecision(6) << static_cast<double>(p.margin) << std::setprecision(12);
        else
            o << "NA,NA";
        o << ',' << (p.trusted ? "yes" : "no") << '\n';
    }
    return o.str();
}

std::string scan_svg(const std::vector<PhasePoint>& points, bool qualitative_overlay) {
    std::map<double, int> xs, ys;
    for (const PhasePoint& p : points) {
        xs[p.K] = 0;
        ys[p.beta_inv] = 0;
    }
    int i = 0;
    for (auto& [k, v] : xs) v = i++;
    i = 0;
    for (auto& [k, v] : ys) v = i++;
    const int cell = 12, margin = 40;
    int w = static_cast<int>(xs.size()) * cell + 2 * margin;
    int h = static_cast<int>(ys.size()) * cell + 2 * margin + (qualitative_overlay ? 40 : 0);
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
    o << "<text x=\"" << margin << "\" y=\"20\" font-size=\"12\">K (horizontal) vs 1/beta (vertical)</text>\n";
    for (const PhasePoint& p : points) {
        const char* fill = p.chalker == Wetting::Partial ? "#3b6fb6" : p.chalker == Wetting::Complete ? "#d9822b" : "#cccccc";
        int x = margin + xs[p.K] * cell;
        int y = margin + (static_cast<int>(ys.size()) - 1 - ys[p.beta_inv]) * cell;
        o << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\""
          << fill << "\"";
        if (p.window) o << " stroke=\"black\" stroke-width=\"" << 1 + *p.window << "\"";
        o << "/>\n";
    }
    if (qualitative_overlay)
        o << "<text x=\"" << margin << "\" y=\"" << h - 20 << "\" font-size=\"11\">"
          << "Qualitative overlay only: tentative layering scenarios, none selected by computation.</text>\n";
    o << "</svg>\n";
    return o.str();
}

const char* check_status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "PASS";
        case CheckStatus::Fail: return "FAIL";
        default: return "NOT-COMPUTED";
    }
}

int CoefficientReport::exit_code() const {
    bool missing = false;
    for (const CoefficientRow& r : rows) {
        if (r.status == CheckStatus::Fail) return 1;
        if (r.status == CheckStatus::NotComputed) missing = true;
    }
    return missing ? 2 : 0;
}

std::string CoefficientReport::table() const {
    std::ostringstream o;
    o << "coefficients at k=" << k << ", N=" << N << '\n';
    o << std::left << std::setw(6) << "name" << std::setw(4) << "h" << std::setw(7) << "order" << std::setw(10)
      << "expected" << std::setw(10) << "value" << "status\n";
    for (const CoefficientRow& r : rows) {
        o << std::left << std::setw(6) << r.name << std::setw(4) << r.h << std::setw(7) << ("t^" + std::to_string(r.order))
          << std::setw(10) << r.expected.str() << std::setw(10) << (r.value ? r.value->str() : std::string("-"))
          << check_status_name(r.status) << '\n';
    }
    int code = exit_code();
    o << (code == 0 ? "PASS" : code == 1 ? "FAIL" : "NOT-COMPUTED") << '\n';
    return o.str();
}

CoefficientReport verify_coefficients(int k, int N, const CatalogSource& source) {
    if (N > kMaxCatalogOrder) throw Error(ErrorCode::OrderTooLarge, "order above the catalog cap");
    if (N < 0) throw Error(ErrorCode::InvalidArgument, "negative order");
    CoefficientReport rep;
    rep.k = k;
    rep.N = N;
    std::map<int, Catalog> catalogs;
    std::map<int, Series> sums;
    auto catalog = [&](int h) -> const Catalog& {
        auto it = catalogs.find(h);
        if (it == catalogs.end()) {
            CatalogKey key{k, h, N};
            it = catalogs.emplace(h, source ? source(key) : cached_catalog(key)).first;
        }
        return it->second;
    };
    auto sum = [&](int h) -> const Series& {
        auto it = sums.find(h);
        if (it == sums.end()) it = sums.emplace(h, ClusterEngine(catalog(h)).cluster_sum(N)).first;
        return it->second;
    };
    auto off_wall = [&](int h, int norm, int wall) {
        long n = 0;
        for (const Perturbation& p : catalog(h).items())
            if (p.norm == norm && p.wall == wall && p.external().I != 0) ++n;
        return Rational(n);
    };
    auto row = [&](const std::string& name, int h, int order, Rational expected, const std::function<Rational()>& f) {
        CoefficientRow r{name, h, order, expected, std::nullopt, CheckStatus::NotComputed};
        if (order <= N) {
            r.value = f();
            r.status = *r.value == expected ? CheckStatus::Pass : CheckStatus::Fail;
        }
        rep.rows.push_back(r);
    };
    row("A", 1, 2, 1, [&] { return sum(1).coefficient(2, 1); });
    row("C", 1, 3, 2, [&] { return sum(1).coefficient(3, 2); });
    row("E", 1, 4, 1, [&] { return sum(2).coefficient(4, 1); });
    row("G", 1, 5, 4, [&] { return sum(2).coefficient(5, 1) - sum(1).coefficient(3, 1); });
    row("I", 1, 6, 2, [&] { return sum(2).coefficient(6, 2); });
    row("A", 2, 4, 1, [&] { return sum(2).coefficient(4, 1); });
    row("C", 2, 6, 2, [&] { return sum(2).coefficient(6, 2); });
    row("E", 2, 6, 1, [&] { return sum(3).coefficient(6, 1); });
    row("B1", 1, 3, 0, [&] { return off_wall(1, 3, 1); });
    row("D1", 1, 4, 0, [&] { return off_wall(1, 4, 2); });
    row("B1", 2, 5, 4, [&] { return off_wall(2, 5, 1); });
    row("D1", 2, 7, 16, [&] { return off_wall(2, 7, 2); });
    row("L42", 1, 4, Rational(-5, 2), [&] { return sum(1).coefficient(4, 2); });
    row("L43", 1, 4, 6, [&] { return sum(1).coefficient(4, 3); });
    row("L44", 1, 4, 1, [&] { return sum(1).coefficient(4, 4); });
    return rep;
}

}  // namespace sos
