#include "sos/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "sos/error.hpp"

namespace sos {

std::uint64_t CounterRng::mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t CounterRng::bits(std::uint64_t sweep, std::uint64_t site, std::uint64_t lane) const {
    return mix(mix(mix(seed) ^ sweep) ^ (site << 2 | lane));
}

double CounterRng::uniform(std::uint64_t sweep, std::uint64_t site, std::uint64_t lane) const {
    return static_cast<double>(bits(sweep, site, lane) >> 11) * 0x1.0p-53;
}

void ChainConfig::validate() const {
    if (box.width <= 0 || box.height <= 0) throw Error(ErrorCode::InvalidArgument, "empty box");
    if (box.boundary < 0) throw Error(ErrorCode::NegativeHeight, "negative boundary level");
    if (!(params.t > 0.0 && params.t < 1.0)) throw Error(ErrorCode::ParamsOutOfRange, "need 0 < t < 1");
    if (burn_in < 0 || sweeps <= burn_in) throw Error(ErrorCode::InvalidArgument, "need sweeps > burn_in >= 0");
    if (thin < 1) throw Error(ErrorCode::InvalidArgument, "thin must be at least 1");
    if (height_cap < 0 || z_max < 0) throw Error(ErrorCode::InvalidArgument, "negative cap");
    if (height_cap > 0 && box.boundary > height_cap) throw Error(ErrorCode::InvalidArgument, "boundary above cap");
    if (batches < 2) throw Error(ErrorCode::InvalidArgument, "need at least two batches");
}

int heat_bath_tail(double t) {
    // Each extra unit above every neighbour costs at least t^2.
    int tail = 1;
    while (std::pow(t, 2.0 * (tail + 1)) >= 1e-14) ++tail;
    return tail;
}

std::vector<double> site_conditional(const HeightConfig& config, int x, int y, const ModelParams& params,
                                     int height_cap) {
    int nb[4] = {config.at(x + 1, y), config.at(x - 1, y), config.at(x, y + 1), config.at(x, y - 1)};
    int top = *std::max_element(nb, nb + 4) + heat_bath_tail(params.t);
    if (height_cap > 0) top = std::min(top, height_cap);
    double half_log_t = 0.5 * std::log(params.t);
    std::vector<double> logw(top + 1);
    for (int h = 0; h <= top; ++h) {
        int grad = 0;
        for (int v : nb) grad += std::abs(h - v);
        logw[h] = half_log_t * grad + (h == 0 ? params.u : 0.0);
    }
    double best = *std::max_element(logw.begin(), logw.end());
    for (double& w : logw) w = std::exp(w - best);
    return logw;
}

int heat_bath_site(const HeightConfig& config, int x, int y, const ModelParams& params, double uniform,
                   int height_cap) {
    std::vector<double> w = site_conditional(config, x, y, params, height_cap);
    double total = 0.0;
    for (double v : w) total += v;
    double target = uniform * total, acc = 0.0;
    for (std::size_t h = 0; h < w.size(); ++h) {
        acc += w[h];
        if (target < acc) return static_cast<int>(h);
    }
    return static_cast<int>(w.size()) - 1;
}

namespace {

double log_local_weight(const HeightConfig& c, int x, int y, int h, const ModelParams& p) {
    int grad = std::abs(h - c.at(x + 1, y)) + std::abs(h - c.at(x - 1, y)) + std::abs(h - c.at(x, y + 1)) +
               std::abs(h - c.at(x, y - 1));
    return 0.5 * std::log(p.t) * grad + (h == 0 ? p.u : 0.0);
}

// +-1 proposal, always up from 0; the Hastings factor accounts for the asymmetry at 0 and 1.
int metropolis_site(const HeightConfig& c, int x, int y, const ModelParams& p, double u1, double u2, int cap) {
    int h = c.at(x, y);
    int next = h == 0 ? 1 : (u1 < 0.5 ? h - 1 : h + 1);
    if (cap > 0 && next > cap) return h;
    double q_forward = h == 0 ? 1.0 : 0.5;
    double q_back = next == 0 ? 1.0 : 0.5;
    double log_ratio = log_local_weight(c, x, y, next, p) - log_local_weight(c, x, y, h, p) +
                       std::log(q_back / q_forward);
    return (log_ratio >= 0.0 || u2 < std::exp(log_ratio)) ? next : h;
}

}  // namespace

void sweep_once(ChainState& state, const ChainConfig& chain) {
    CounterRng rng{chain.seed};
    HeightConfig& c = state.config;
    auto s = static_cast<std::uint64_t>(state.sweep);
    for (int colour = 0; colour < 2; ++colour)
        for (int y = 0; y < c.box.height; ++y)
            for (int x = 0; x < c.box.width; ++x) {
                if ((x + y) % 2 != colour) continue;
                std::uint64_t site = c.box.index(x, y);
                int h;
                if (chain.sampler == Sampler::HeatBath)
                    h = heat_bath_site(c, x, y, chain.params, rng.uniform(s, site, 0), chain.height_cap);
                else
                    h = metropolis_site(c, x, y, chain.params, rng.uniform(s, site, 0), rng.uniform(s, site, 1),
                                        chain.height_cap);
                c.ref(x, y) = h;
            }
    ++state.sweep;
}

namespace {

// Batch means over a series of per-sample values.
Estimate batch_mean(const std::vector<double>& xs, int batches) {
    Estimate e;
    std::size_t n = xs.size();
    if (n == 0) return e;
    double total = 0.0;
    for (double v : xs) total += v;
    e.mean = total / static_cast<double>(n);
    std::size_t b = std::min<std::size_t>(static_cast<std::size_t>(batches), n);
    if (b < 2) return e;
    std::size_t per = n / b;
    std::vector<double> means(b, 0.0);
    for (std::size_t i = 0; i < b; ++i) {
        double sum = 0.0;
        for (std::size_t j = i * per; j < (i + 1) * per; ++j) sum += xs[j];
        means[i] = sum / static_cast<double>(per);
    }
    double mm = 0.0;
    for (double m : means) mm += m;
    mm /= static_cast<double>(b);
    double var = 0.0;
    for (double m : means) var += (m - mm) * (m - mm);
    var /= static_cast<double>(b - 1);
    e.se = std::sqrt(var / static_cast<double>(b));
    return e;
}

}  // namespace

ObservableSet run_chain(const ChainConfig& chain) {
    chain.validate();
    ChainState state{HeightConfig(chain.box), 0};
    int bins = chain.z_max + 2;
    std::size_t sites = chain.box.size();
    std::vector<std::vector<double>> hist(bins);
    std::vector<double> not_at_n;
    std::vector<double> site_zero(sites, 0.0);
    std::vector<int> counts(bins);
    long samples = 0;
    for (long s = 0; s < chain.sweeps; ++s) {
        sweep_once(state, chain);
        if (s < chain.burn_in || (s - chain.burn_in) % chain.thin != 0) continue;
        std::fill(counts.begin(), counts.end(), 0);
        int off = 0;
        for (std::size_t i = 0; i < sites; ++i) {
            int h = state.config.heights[i];
            ++counts[std::min(h, chain.z_max + 1)];
            if (h != chain.box.boundary) ++off;
            if (h == 0) site_zero[i] += 1.0;
        }
        for (int b = 0; b < bins; ++b) hist[b].push_back(counts[b] / static_cast<double>(sites));
        not_at_n.push_back(off / static_cast<double>(sites));
        ++samples;
    }
    ObservableSet obs;
    obs.samples = samples;
    for (int b = 0; b < bins; ++b) obs.level_histogram.push_back(batch_mean(hist[b], chain.batches));
    std::vector<double> cumulative(samples, 0.0);
    for (int z = 0; z <= chain.z_max; ++z) {
        for (long i = 0; i < samples; ++i) cumulative[i] += hist[z][i];
        obs.rho_z.push_back(batch_mean(cumulative, chain.batches));
    }
    obs.rho0 = obs.rho_z.front();
    obs.not_at_n = batch_mean(not_at_n, chain.batches);
    for (int b = 1; b < bins; ++b)
        if (obs.level_histogram[b].mean > obs.level_histogram[obs.majority_level].mean) obs.majority_level = b;
    for (double& v : site_zero) v /= static_cast<double>(std::max<long>(samples, 1));
    obs.site_rho0 = site_zero;
    return obs;
}

LowerBoundCheck rho_lower_bound_check(int n, const ObservableSet& obs, double t) {
    LowerBoundCheck c;
    c.bound = 0.5 * std::pow(t, 2.0 * n);
    c.converged = obs.rho0.se < 0.25 * std::max(c.bound, obs.rho0.mean);
    c.holds = obs.rho0.mean >= c.bound;
    return c;
}

std::string csv_header(int z_max) {
    std::string h = "t,u,beta,J,K,n_boundary,L,sweeps,seed,rho0,rho0_se,majority_level,not_at_n,not_at_n_se";
    for (int z = 0; z <= z_max; ++z) h += ",rho_z" + std::to_string(z);
    return h;
}

std::string csv_row(const ChainConfig& chain, const ObservableSet& obs) {
    std::ostringstream o;
    o << std::setprecision(12);
    const ModelParams& p = chain.params;
    o << p.t << ',' << p.u << ',' << p.beta() << ',' << p.J << ',' << p.K() << ',' << chain.box.boundary << ','
      << chain.box.width << ',' << chain.sweeps << ',' << chain.seed << ',' << obs.rho0.mean << ','
      << obs.rho0.se << ',' << obs.majority_level << ',' << obs.not_at_n.mean << ',' << obs.not_at_n.se;
    for (const Estimate& e : obs.rho_z) o << ',' << e.mean;
    return o.str();
}

ExactObservables exact_observables(const Box& box, const ModelParams& params, int height_cap, int z_max,
                                   bool check_cap) {
    ExactOracleSettings settings;
    settings.height_cap = height_cap;
    if (!check_cap) settings.cap_tolerance = std::numeric_limits<double>::infinity();
    int bins = z_max + 2;
    std::size_t count = static_cast<std::size_t>(bins) + 1;
    double sites = static_cast<double>(box.size());
    auto values = exact_expectations(
        box, params, settings,
        [&](const HeightConfig& c, double* out) {
            std::fill(out, out + count, 0.0);
            for (int h : c.heights) {
                out[std::min(h, z_max + 1)] += 1.0 / sites;
                if (h != box.boundary) out[bins] += 1.0 / sites;
            }
        },
        count);
    ExactObservables e;
    double acc = 0.0;
    for (int b = 0; b < bins; ++b) {
        e.level_histogram.push_back(values[b]);
        if (b <= z_max) {
            acc += values[b];
            e.rho_z.push_back(acc);
        }
    }
    e.rho0 = e.rho_z.front();
    e.not_at_n = values[bins];
    return e;
}

}  // namespace sos
