#include "sos/sos.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "sos/catalog.hpp"
#include "sos/clusters.hpp"
#include "sos/commands.hpp"
#include "sos/error.hpp"
#include "sos/geometry.hpp"
#include "sos/lattice.hpp"
#include "sos/montecarlo.hpp"
#include "sos/phase.hpp"

struct sos_catalog {
    sos::Catalog value;
};

struct sos_series {
    sos::Series value;
};

namespace {

thread_local std::string g_error;
thread_local int g_code = 0;

int ok() {
    g_error.clear();
    g_code = SOS_OK;
    return SOS_OK;
}

int fail(int code, const std::string& message) {
    g_code = code;
    g_error = message;
    return code;
}

template <class F>
int guarded(F&& body) {
    try {
        body();
        return ok();
    } catch (const sos::Error& e) {
        return fail(static_cast<int>(e.code()), e.what());
    } catch (const std::invalid_argument& e) {
        return fail(SOS_E_INVALID_ARGUMENT, e.what());
    } catch (const std::out_of_range& e) {
        return fail(SOS_E_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(SOS_E_INTERNAL, e.what());
    } catch (...) {
        return fail(SOS_E_INTERNAL, "unknown failure");
    }
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void need(const void* p, const char* what) {
    if (!p) throw sos::Error(sos::ErrorCode::InvalidArgument, std::string("null ") + what);
}

sos::HeightConfig config_from(int width, int height, int boundary, const int* heights) {
    need(heights, "heights");
    if (width <= 0 || height <= 0) throw sos::Error(sos::ErrorCode::InvalidArgument, "empty box");
    sos::Box box{width, height, boundary};
    sos::HeightConfig c(box, std::vector<int>(heights, heights + box.size()));
    c.validate();
    return c;
}

}  // namespace

extern "C" {

const char* sos_last_error(void) { return g_error.c_str(); }
int sos_last_error_code(void) { return g_code; }
void sos_string_free(char* s) { std::free(s); }

int sos_params_from_physical(double J, double K, double beta, double* t, double* u) {
    return guarded([&] {
        need(t, "t");
        need(u, "u");
        auto p = sos::ModelParams::from_physical(J, K, beta);
        *t = p.t;
        *u = p.u;
    });
}

int sos_energy(int width, int height, int boundary, const int* heights, double t, double u, double* out) {
    return guarded([&] {
        need(out, "out");
        *out = sos::energy(config_from(width, height, boundary, heights), sos::ModelParams::from_tu(t, u));
    });
}

int sos_log_partition(int width, int height, int boundary, double t, double u, int height_cap, double* log_z) {
    return guarded([&] {
        need(log_z, "log_z");
        sos::ExactOracleSettings s;
        s.height_cap = height_cap;
        *log_z = sos::exact_partition({width, height, boundary}, sos::ModelParams::from_tu(t, u), s).log_value;
    });
}

int sos_decompose(int width, int height, int boundary, const int* heights, char** text) {
    return guarded([&] {
        need(text, "text");
        *text = copy_string(sos::to_debug_text(sos::decompose(config_from(width, height, boundary, heights))));
    });
}

int sos_reconstruct(const char* text, int width, int height, int* heights_out) {
    return guarded([&] {
        need(text, "text");
        need(heights_out, "heights_out");
        sos::CylinderSet set = sos::from_debug_text(text);
        sos::HeightConfig c = sos::reconstruct(set, {width, height, set.level});
        std::copy(c.heights.begin(), c.heights.end(), heights_out);
    });
}

int sos_catalog_build(int k, int h, int N, const char* cache_dir, sos_catalog** out) {
    return guarded([&] {
        need(out, "out");
        sos::CatalogKey key{k, h, N};
        auto* c = new sos_catalog{cache_dir && *cache_dir ? sos::load_or_build_catalog(key, cache_dir)
                                                           : sos::enumerate_catalog(key)};
        *out = c;
    });
}

size_t sos_catalog_size(const sos_catalog* c) { return c ? c->value.size() : 0; }
long sos_catalog_count(const sos_catalog* c, int norm, int wall) { return c ? c->value.count(norm, wall) : 0; }
uint64_t sos_catalog_hash(const sos_catalog* c) { return c ? c->value.content_hash() : 0; }

int sos_catalog_serialize(const sos_catalog* c, char** text) {
    return guarded([&] {
        need(c, "catalog");
        need(text, "text");
        *text = copy_string(c->value.serialize());
    });
}

void sos_catalog_free(sos_catalog* c) { delete c; }

int sos_free_energy(int h, int k, int N, sos_series** out) {
    return guarded([&] {
        need(out, "out");
        *out = new sos_series{sos::free_energy(h, k, N)};
    });
}

int sos_free_energy_difference(int h, int k, int N, sos_series** out) {
    return guarded([&] {
        need(out, "out");
        *out = new sos_series{sos::free_energy_difference(h, k, N).difference};
    });
}

int sos_series_dump(const sos_series* s, char** text) {
    return guarded([&] {
        need(s, "series");
        need(text, "text");
        *text = copy_string(s->value.dump());
    });
}

int sos_series_pretty(const sos_series* s, char** text) {
    return guarded([&] {
        need(s, "series");
        need(text, "text");
        *text = copy_string(s->value.pretty());
    });
}

int sos_series_evaluate(const sos_series* s, double t, double u, double* out) {
    return guarded([&] {
        need(s, "series");
        need(out, "out");
        *out = s->value.evaluate(t, u);
    });
}

void sos_series_free(sos_series* s) { delete s; }

int sos_dominant_level(double t, double u, int k, int N, int h_max, int* level, double* margin, int* trusted) {
    return guarded([&] {
        auto r = sos::dominant_level(t, u, k, N, h_max);
        if (level) *level = r.level;
        if (margin) *margin = static_cast<double>(r.min_margin);
        if (trusted) *trusted = r.within_convergence_range ? 1 : 0;
    });
}

int sos_chalker_classify(double J, double K, double beta, int* classification) {
    return guarded([&] {
        need(classification, "classification");
        *classification = static_cast<int>(sos::chalker_classify(J, K, beta));
    });
}

int sos_layering_windows(double t, double epsilon, int n_max, double* lo, double* hi) {
    return guarded([&] {
        need(lo, "lo");
        need(hi, "hi");
        auto ws = sos::layering_windows(t, epsilon, n_max);
        for (std::size_t i = 0; i < ws.size(); ++i) {
            lo[i] = ws[i].lo;
            hi[i] = ws[i].hi;
        }
    });
}

int sos_verify_coefficients(int k, int N, char** table, int* exit_code) {
    return guarded([&] {
        auto r = sos::verify_coefficients(k, N);
        if (table) *table = copy_string(r.table());
        if (exit_code) *exit_code = r.exit_code();
    });
}

void sos_chain_config_default(sos_chain_config* c) {
    if (!c) return;
    sos::ChainConfig d;
    c->width = c->height = 16;
    c->boundary = 0;
    c->t = 0.1;
    c->u = 0.0;
    c->J = 1.0;
    c->sweeps = d.sweeps;
    c->burn_in = d.burn_in;
    c->thin = d.thin;
    c->seed = d.seed;
    c->metropolis = 0;
    c->height_cap = d.height_cap;
    c->z_max = d.z_max;
    c->batches = d.batches;
}

int sos_run_chain(const sos_chain_config* c, double* rho0, double* rho0_se, int* majority_level, double* not_at_n,
                  double* not_at_n_se, double* rho_z, double* rho_z_se, char** csv_row) {
    return guarded([&] {
        need(c, "config");
        sos::ChainConfig chain;
        chain.box = {c->width, c->height, c->boundary};
        chain.params = sos::ModelParams::from_tu(c->t, c->u, c->J);
        chain.sweeps = c->sweeps;
        chain.burn_in = c->burn_in;
        chain.thin = c->thin;
        chain.seed = c->seed;
        chain.sampler = c->metropolis ? sos::Sampler::Metropolis : sos::Sampler::HeatBath;
        chain.height_cap = c->height_cap;
        chain.z_max = c->z_max;
        chain.batches = c->batches;
        sos::ObservableSet o = sos::run_chain(chain);
        if (rho0) *rho0 = o.rho0.mean;
        if (rho0_se) *rho0_se = o.rho0.se;
        if (majority_level) *majority_level = o.majority_level;
        if (not_at_n) *not_at_n = o.not_at_n.mean;
        if (not_at_n_se) *not_at_n_se = o.not_at_n.se;
        for (std::size_t z = 0; z < o.rho_z.size(); ++z) {
            if (rho_z) rho_z[z] = o.rho_z[z].mean;
            if (rho_z_se) rho_z_se[z] = o.rho_z[z].se;
        }
        if (csv_row) *csv_row = copy_string(sos::csv_row(chain, o));
    });
}

int sos_cmd_verify_coefficients(int k, int N, char** text, int* exit_code) {
    return guarded([&] {
        need(text, "text");
        auto r = sos::run_verify_coefficients(k, N);
        *text = copy_string(r.text);
        if (exit_code) *exit_code = r.exit_code;
    });
}

int sos_cmd_free_energy(int h, int k, int N, const char* output_dir, char** text) {
    return guarded([&] {
        need(text, "text");
        *text = copy_string(sos::run_free_energy(h, k, N, output_dir ? output_dir : ".").text);
    });
}

int sos_cmd_windows(double t, double epsilon, int n_max, char** text) {
    return guarded([&] {
        need(text, "text");
        *text = copy_string(sos::run_windows(t, epsilon, n_max).text);
    });
}

int sos_cmd_chalker(double J, const char* beta_grid, const char* K_grid, char** text) {
    return guarded([&] {
        need(text, "text");
        need(beta_grid, "beta grid");
        need(K_grid, "K grid");
        *text = copy_string(sos::run_chalker(J, beta_grid, K_grid).text);
    });
}

int sos_cmd_scan(const char* spec_path, const char* output_dir, char** text) {
    return guarded([&] {
        need(text, "text");
        need(spec_path, "spec path");
        *text = copy_string(sos::run_scan(spec_path, output_dir ? output_dir : ".").text);
    });
}

int sos_cmd_simulate(const char* spec_path, const char* output_dir, int has_seed, uint64_t seed, char** text) {
    return guarded([&] {
        need(text, "text");
        need(spec_path, "spec path");
        std::optional<std::uint64_t> s;
        if (has_seed) s = seed;
        *text = copy_string(sos::run_simulate(spec_path, output_dir ? output_dir : ".", s).text);
    });
}

int sos_cmd_oracle(const char* spec_path, const char* output_dir, char** text) {
    return guarded([&] {
        need(text, "text");
        need(spec_path, "spec path");
        *text = copy_string(sos::run_oracle(spec_path, output_dir ? output_dir : ".").text);
    });
}

int sos_default_output_dir(char** text) {
    return guarded([&] {
        need(text, "text");
        *text = copy_string(sos::default_output_dir());
    });
}

}  // extern "C"
