#include "sos/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "sos/clusters.hpp"
#include "sos/error.hpp"
#include "sos/lattice.hpp"
#include "sos/montecarlo.hpp"
#include "sos/phase.hpp"
#include "sos/specfile.hpp"

namespace sos {

std::string default_output_dir() {
    const char* env = std::getenv("SOS_OUTPUT_DIR");
    return env && *env ? env : ".";
}

namespace {

std::string write_file(const std::string& dir, const std::string& name, const std::string& body) {
    std::filesystem::path base = dir.empty() ? std::filesystem::path(".") : std::filesystem::path(dir);
    std::filesystem::path p = std::filesystem::path(name).is_absolute() ? std::filesystem::path(name) : base / name;
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream f(p);
    if (!f) throw Error(ErrorCode::IoError, "cannot write " + p.string());
    f << body;
    if (!f) throw Error(ErrorCode::IoError, "write failed for " + p.string());
    return p.string();
}

// (t, u) from either parameterization; exactly one may be given.
ModelParams params_from_spec(const SpecFile& s) {
    bool tu = s.has("t") || s.has("u");
    bool phys = s.has("K") || s.has("beta");
    if (tu == phys) throw Error(ErrorCode::ParseError, "give exactly one of (t, u) or (K, beta)");
    double J = s.get_double("J", 1.0);
    if (tu) return ModelParams::from_tu(s.require_double("t"), s.require_double("u"), J);
    return ModelParams::from_physical(J, s.require_double("K"), s.require_double("beta"));
}

std::vector<double> grid(double lo, double hi, long count, bool log_spacing) {
    if (count < 0) throw Error(ErrorCode::ParseError, "negative grid count");
    std::vector<double> out;
    for (long i = 0; i < count; ++i) {
        double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        out.push_back(log_spacing ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))) : lo + f * (hi - lo));
    }
    return out;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
    std::istringstream in(spec);
    std::string a, b, c;
    if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c) )
        throw Error(ErrorCode::ParseError, "grid must look like lo:hi:count");
    try {
        return grid(std::stod(a), std::stod(b), std::stol(c), false);
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::ParseError, "grid must look like lo:hi:count");
    }
}

CommandOutput run_verify_coefficients(int k, int N) {
    CoefficientReport rep = verify_coefficients(k, N);
    return {rep.exit_code(), rep.table(), {}};
}

CommandOutput run_free_energy(int h, int k, int N, const std::string& output_dir) {
    Series f = free_energy(h, k, N);
    CommandOutput out;
    out.text = "f(" + std::to_string(h) + ") = " + f.pretty() + "\n";
    std::string name = "free_energy_h" + std::to_string(h) + "_k" + std::to_string(k) + "_N" + std::to_string(N) + ".txt";
    out.files.push_back(write_file(output_dir, name, f.dump()));
    out.text += "wrote " + out.files.back() + "\n";
    return out;
}

CommandOutput run_windows(double t, double epsilon, int n_max) {
    auto ws = layering_windows(t, epsilon, n_max);
    std::ostringstream o;
    o << std::setprecision(12) << "n,u_lo,u_hi,gap_below\n";
    for (std::size_t i = 0; i < ws.size(); ++i) {
        o << ws[i].n << ',' << ws[i].lo << ',' << ws[i].hi << ',';
        if (i + 1 < ws.size())
            o << ws[i].lo - ws[i + 1].hi;
        else
            o << "NA";
        o << '\n';
    }
    return {0, o.str(), {}};
}

CommandOutput run_chalker(double J, const std::string& beta_grid, const std::string& K_grid) {
    std::ostringstream o;
    o << std::setprecision(12) << "J,K,beta,beta_inv,t,u,chalker\n";
    for (double beta : parse_grid(beta_grid))
        for (double K : parse_grid(K_grid)) {
            Wetting w = chalker_classify(J, K, beta);
            ModelParams p = ModelParams::from_physical(J, K, beta);
            o << J << ',' << K << ',' << beta << ',' << 1.0 / beta << ',' << p.t << ',' << p.u << ','
              << wetting_name(w) << '\n';
        }
    return {0, o.str(), {}};
}

CommandOutput run_scan(const std::string& spec_path, const std::string& output_dir) {
    static const std::set<std::string> keys = {
        "J", "k", "N", "h_max", "epsilon", "n_max", "series", "t_min", "t_max", "t_count", "t_spacing", "u_min",
        "u_max", "u_count", "K_min", "K_max", "K_count", "beta_inv_min", "beta_inv_max", "beta_inv_count",
        "output", "svg", "overlay"};
    SpecFile s = SpecFile::load(spec_path, keys);
    ScanSettings set;
    set.J = s.get_double("J", 1.0);
    set.k = static_cast<int>(s.get_long("k", 8));
    set.N = static_cast<int>(s.get_long("N", 6));
    set.h_max = static_cast<int>(s.get_long("h_max", 3));
    set.epsilon = s.get_double("epsilon", 0.5);
    set.n_max = static_cast<int>(s.get_long("n_max", 3));
    set.series = s.get_bool("series", true);
    bool tu = s.has("t_min") || s.has("u_min");
    bool phys = s.has("K_min") || s.has("beta_inv_min");
    if (tu == phys) throw Error(ErrorCode::ParseError, "give exactly one grid: (t, u) or (K, beta_inv)");
    std::vector<PhasePoint> pts;
    if (tu) {
        std::string spacing = s.get("t_spacing", "linear");
        if (spacing != "linear" && spacing != "log") throw Error(ErrorCode::ParseError, "t_spacing is linear or log");
        auto ts = grid(s.require_double("t_min"), s.get_double("t_max", s.require_double("t_min")),
                       s.get_long("t_count", 1), spacing == "log");
        auto us = grid(s.require_double("u_min"), s.get_double("u_max", s.require_double("u_min")),
                       s.get_long("u_count", 1), false);
        pts = scan_tu(ts, us, set);
    } else {
        auto Ks = grid(s.require_double("K_min"), s.get_double("K_max", s.require_double("K_min")),
                       s.get_long("K_count", 1), false);
        auto bs = grid(s.require_double("beta_inv_min"),
                       s.get_double("beta_inv_max", s.require_double("beta_inv_min")),
                       s.get_long("beta_inv_count", 1), false);
        pts = scan_physical(Ks, bs, set);
    }
    CommandOutput out;
    std::string csv = scan_csv(pts);
    out.files.push_back(write_file(output_dir, s.get("output", "scan.csv"), csv));
    if (s.has("svg")) out.files.push_back(write_file(output_dir, s.get("svg", ""), scan_svg(pts, s.get_bool("overlay", false))));
    out.text = std::to_string(pts.size()) + " points\n";
    for (const std::string& f : out.files) out.text += "wrote " + f + "\n";
    return out;
}

CommandOutput run_simulate(const std::string& spec_path, const std::string& output_dir,
                           std::optional<std::uint64_t> seed) {
    static const std::set<std::string> keys = {"t", "u", "J", "K", "beta", "L", "width", "height", "boundary",
                                               "sweeps", "burn_in", "thin", "seed", "sampler", "height_cap",
                                               "z_max", "batches", "output"};
    SpecFile s = SpecFile::load(spec_path, keys);
    ChainConfig c;
    c.params = params_from_spec(s);
    long L = s.get_long("L", 16);
    c.box.width = static_cast<int>(s.get_long("width", L));
    c.box.height = static_cast<int>(s.get_long("height", L));
    c.box.boundary = static_cast<int>(s.get_long("boundary", 0));
    c.sweeps = s.get_long("sweeps", 10000);
    c.burn_in = s.get_long("burn_in", c.sweeps / 10);
    c.thin = static_cast<int>(s.get_long("thin", 1));
    c.height_cap = static_cast<int>(s.get_long("height_cap", 0));
    c.z_max = static_cast<int>(s.get_long("z_max", 4));
    c.batches = static_cast<int>(s.get_long("batches", 50));
    std::string sampler = s.get("sampler", "heat_bath");
    if (sampler == "heat_bath")
        c.sampler = Sampler::HeatBath;
    else if (sampler == "metropolis")
        c.sampler = Sampler::Metropolis;
    else
        throw Error(ErrorCode::ParseError, "sampler is heat_bath or metropolis");
    if (seed)
        c.seed = *seed;
    else if (s.has("seed"))
        c.seed = std::stoull(s.get("seed", "0"));
    else
        throw Error(ErrorCode::ParseError, "a seed is required (spec key or --seed)");
    ObservableSet obs = run_chain(c);
    std::string csv = csv_header(c.z_max) + "\n" + csv_row(c, obs) + "\n";
    CommandOutput out;
    out.text = csv;
    if (s.has("output")) out.files.push_back(write_file(output_dir, s.get("output", ""), csv));
    return out;
}

CommandOutput run_oracle(const std::string& spec_path, const std::string& output_dir) {
    static const std::set<std::string> keys = {"t",        "u",          "J",     "K",         "beta", "width",
                                               "height",   "boundary",   "height_cap", "z_max", "check_cap",
                                               "output"};
    SpecFile s = SpecFile::load(spec_path, keys);
    ModelParams p = params_from_spec(s);
    Box box{static_cast<int>(s.get_long("width", 3)), static_cast<int>(s.get_long("height", 3)),
            static_cast<int>(s.get_long("boundary", 0))};
    int cap = static_cast<int>(s.get_long("height_cap", 4));
    int z_max = static_cast<int>(s.get_long("z_max", 4));
    ExactObservables e = exact_observables(box, p, cap, z_max, s.get_bool("check_cap", true));
    std::ostringstream o;
    o << std::setprecision(15) << "observable,value\n";
    o << "rho0," << e.rho0 << '\n';
    for (std::size_t z = 0; z < e.rho_z.size(); ++z) o << "rho_z" << z << ',' << e.rho_z[z] << '\n';
    for (std::size_t z = 0; z < e.level_histogram.size(); ++z) {
        if (z + 1 == e.level_histogram.size())
            o << "level_above" << z - 1;
        else
            o << "level" << z;
        o << ',' << e.level_histogram[z] << '\n';
    }
    o << "not_at_n," << e.not_at_n << '\n';
    CommandOutput out;
    out.text = o.str();
    if (s.has("output")) out.files.push_back(write_file(output_dir, s.get("output", ""), out.text));
    return out;
}

}  // namespace sos
