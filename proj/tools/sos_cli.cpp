#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <string>

#include "sos/sos.h"

namespace {

constexpr int kRuntimeError = 3;

int report(int status, char* text) {
    if (status != SOS_OK) {
        std::fprintf(stderr, "error: %s\n", sos_last_error());
        return kRuntimeError;
    }
    if (text) std::fputs(text, stdout);
    sos_string_free(text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Layering and wetting in a solid-on-solid interface: series, windows, sampling"};
    app.require_subcommand(1);

    std::string output_dir;
    {
        char* dir = nullptr;
        if (sos_default_output_dir(&dir) == SOS_OK) {
            output_dir = dir;
            sos_string_free(dir);
        }
    }
    app.add_option("--output-dir", output_dir, "Directory for written files (default: $SOS_OUTPUT_DIR or .)");

    int k = 8, N = 7, h = 1;
    auto* verify = app.add_subcommand("verify-coefficients", "Check the extracted expansion coefficients");
    verify->add_option("--k", k, "Elementary cutoff");
    verify->add_option("--N", N, "Series order");

    int fk = 8, forder = 6;
    auto* fe = app.add_subcommand("free-energy", "Truncated free energy at level h");
    fe->set_help_flag("--help", "Print this help message and exit");
    fe->add_option("--h", h, "Level")->required();
    fe->add_option("--k", fk, "Elementary cutoff");
    fe->add_option("--order", forder, "Series order");

    double t = 0.0, epsilon = 0.5;
    int n_max = 3;
    auto* win = app.add_subcommand("windows", "Layering windows in u");
    win->add_option("--t", t, "t = exp(-4 beta J)")->required();
    win->add_option("--epsilon", epsilon, "Window margin in (0, 2)");
    win->add_option("--nmax", n_max, "Largest layer index");

    double J = 1.0;
    std::string beta_grid, K_grid;
    auto* chalker = app.add_subcommand("chalker", "Classify a (beta, K) grid by the wetting criteria");
    chalker->add_option("--J", J, "Coupling");
    chalker->add_option("--beta-grid", beta_grid, "lo:hi:count")->required();
    chalker->add_option("--K-grid", K_grid, "lo:hi:count")->required();

    std::string spec;
    auto* scan = app.add_subcommand("scan", "Phase scan from a spec file");
    scan->add_option("--spec", spec, "key=value spec file")->required();

    std::uint64_t seed = 0;
    auto* sim = app.add_subcommand("simulate", "Monte Carlo run from a spec file");
    sim->add_option("--spec", spec, "key=value spec file")->required();
    auto* seed_opt = sim->add_option("--seed", seed, "Random seed (overrides the spec)");

    auto* oracle = app.add_subcommand("oracle", "Exact observables on a small box from a spec file");
    oracle->add_option("--spec", spec, "key=value spec file")->required();

    CLI11_PARSE(app, argc, argv);

    char* text = nullptr;
    if (verify->parsed()) {
        int code = 0;
        if (sos_cmd_verify_coefficients(k, N, &text, &code) != SOS_OK) return report(SOS_E_INTERNAL, nullptr);
        std::fputs(text, stdout);
        sos_string_free(text);
        return code;
    }
    int status = SOS_E_INTERNAL;
    if (fe->parsed()) status = sos_cmd_free_energy(h, fk, forder, output_dir.c_str(), &text);
    if (win->parsed()) status = sos_cmd_windows(t, epsilon, n_max, &text);
    if (chalker->parsed()) status = sos_cmd_chalker(J, beta_grid.c_str(), K_grid.c_str(), &text);
    if (scan->parsed()) status = sos_cmd_scan(spec.c_str(), output_dir.c_str(), &text);
    if (sim->parsed())
        status = sos_cmd_simulate(spec.c_str(), output_dir.c_str(), seed_opt->count() > 0 ? 1 : 0, seed, &text);
    if (oracle->parsed()) status = sos_cmd_oracle(spec.c_str(), output_dir.c_str(), &text);
    return report(status, text);
}
