// Copyright 2026 The eitmem Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EITMEM_CLI_HPP
#define EITMEM_CLI_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "eitmem/optimizer.hpp"

namespace eitmem {

// Exit-code contract: 0 success (warnings allowed), 2 config error,
// 3 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// A signal or control specification from a config block: a CSV file, a named
/// built-in shape, a power level or an explicit Rabi amplitude.
struct FieldSpec {
  std::string file;
  std::string shape;
  double duration_us = 0.0;
  std::optional<double> power_mW;
  std::optional<double> rabi;        // rad/us
  std::optional<double> window_us;   // flat controls: explicit window length
};

struct RunConfig {
  MediumParams medium;
  double configured_rabi = 0.0;  // from the calibrated medium form, if used
  SolverGrid grid;
  std::string run_id;
  std::filesystem::path output_dir;
  std::string config_hash;
  std::string command;  // simulate | iterate | optimize-control | scan

  // simulate
  FieldSpec sim_input, sim_write_control, sim_read_control;
  double tau_us = 0.0;

  // iterate
  FieldSpec iter_input;  // optional; default seed otherwise
  std::vector<double> iter_powers_mW;
  double iter_tol = 1e-3;
  int iter_max = 20;
  std::optional<double> iter_window_us;

  // optimize-control
  std::vector<FieldSpec> opt_inputs;
  ControlOptOptions opt_options;

  // scan
  std::vector<double> scan_powers_mW;
  std::vector<double> scan_alpha_L;

  /// Parse + validate a config file for a command; throws ConfigError with the
  /// offending field path.
  static RunConfig load(const std::string& command, const std::filesystem::path& config_path,
                        const std::optional<std::string>& run_id_override,
                        const std::optional<std::string>& out_override);
};

int cmd_simulate(const RunConfig& cfg);
int cmd_iterate(const RunConfig& cfg, int jobs);
int cmd_optimize_control(const RunConfig& cfg);
int cmd_scan(const RunConfig& cfg, int jobs);

/// Shared entry used by main(); returns the process exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace eitmem

#endif  // EITMEM_CLI_HPP
