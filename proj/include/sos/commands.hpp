#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sos {

struct CommandOutput {
    int exit_code = 0;
    std::string text;                 // what the command prints
    std::vector<std::string> files;   // paths written
};

// Output directory from the environment (SOS_OUTPUT_DIR), or "." when unset.
std::string default_output_dir();

CommandOutput run_verify_coefficients(int k, int N);
CommandOutput run_free_energy(int h, int k, int N, const std::string& output_dir);
CommandOutput run_windows(double t, double epsilon, int n_max);
// Grids are "lo:hi:count".
CommandOutput run_chalker(double J, const std::string& beta_grid, const std::string& K_grid);
CommandOutput run_scan(const std::string& spec_path, const std::string& output_dir);
CommandOutput run_simulate(const std::string& spec_path, const std::string& output_dir,
                           std::optional<std::uint64_t> seed);
CommandOutput run_oracle(const std::string& spec_path, const std::string& output_dir);

std::vector<double> parse_grid(const std::string& spec);

}  // namespace sos
