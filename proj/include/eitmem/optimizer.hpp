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

#ifndef EITMEM_OPTIMIZER_HPP
#define EITMEM_OPTIMIZER_HPP

#include <functional>
#include <vector>

#include "eitmem/solver.hpp"

namespace eitmem {

struct IterationRecord {
  SampledPulse input;
  double efficiency = 0.0;
  double overlap_with_previous = 0.0;  // 0 for the zeroth run
  // kept for figure emission
  SampledPulse leak;
  SampledPulse retrieved;
};

struct OptimizationTrace {
  std::vector<IterationRecord> iterations;
  bool converged = false;
  SampledPulse final_input;
  double final_efficiency = 0.0;
};

/// Time-reversal iteration for the optimal input shape under a fixed writing
/// control: store, retrieve with the time-reversed control, then feed the
/// renormalized time-reversed output back in. Stops when consecutive inputs
/// overlap above 1-tol. Throws OptimizationStalledError if the retrieved
/// energy falls under 1e-6 of the input.
OptimizationTrace iterate_signal(const SampledPulse& e0, const SampledPulse& omega_write,
                                 double tau, const MediumParams& m, const SolverGrid& grid,
                                 double tol = 1e-3, int max_iter = 20);

struct OptimalMode {
  SpinWave spin_wave;    // unit-normalized, real-positive at its peak
  double eta_max = 0.0;  // decay-free maximum total efficiency at this depth
  int cycles = 0;
};

/// Dominant mode of the store(reverse(retrieve(.))) composite under a constant
/// control, by power iteration with per-cycle renormalization; the eigenvalue
/// is read as the per-cycle energy ratio once it is stable to 1e-6 over three
/// cycles. gamma_s is forced to zero (the optimum is decay-free by definition
/// and then independent of the control level).
OptimalMode optimal_spin_wave(const MediumParams& m, const SolverGrid& grid);

/// (alpha_L, eta_max) table via optimal_spin_wave per point.
std::vector<std::pair<double, double>> max_efficiency_curve(
    const std::vector<double>& alpha_L_values, const MediumParams& m_template,
    const SolverGrid& grid);

struct ControlOptOptions {
  double max_rabi = 0.0;        // rad/us; 0 => 4x the compression-matched level
  int max_ascent_iters = 150;
  double stall_rel_gain = 1e-4;  // relative eta gain considered progress
  int patience = 12;             // ascent steps without progress before stopping
  double target_tol = 0.03;      // |achieved - eta_max*decay| margin for the flag
  double retrieval_rabi = 0.0;   // rad/us; 0 => sqrt(alpha_L gamma / 15)
  double duration_match = 1.32;  // converged-pulse width in group delays
};

struct ControlOptResult {
  SampledPulse omega_write;
  double achieved_eta = 0.0;
  double target_eta = 0.0;  // eta_max * exp(-2 gamma_s tau)
  bool at_optimum = false;
  int ascent_iters = 0;
};

/// Optimal writing control for a given input pulse by projected adjoint-state
/// gradient ascent on Omega(t): each step costs one forward writing solve, one
/// retrieval, one storage run (for the retrieval-Gram image) and one adjoint
/// writing solve. The control lives on the signal's time grid, clamped to
/// [0, max_rabi], initialized from the constant level whose group velocity
/// compresses the input into the medium. Retrieval uses a fixed flat control.
ControlOptResult optimize_control(const SampledPulse& e_in, const MediumParams& m,
                                  double tau, const SolverGrid& grid,
                                  const ControlOptOptions& opts = {});

/// Gradient of the protocol efficiency with respect to the writing-control
/// samples (one forward + one adjoint solve). Exposed for verification against
/// finite differences.
std::vector<double> control_gradient(const SampledPulse& e_in, const SampledPulse& omega_write,
                                     const SampledPulse& omega_read, double tau,
                                     const MediumParams& m, const SolverGrid& grid,
                                     double* eta_out = nullptr);

struct ScanPoint {
  double power_mW = 0.0;
  double alpha_L = 0.0;
  double eta = 0.0;
  bool ok = false;
  bool converged = false;
  int iterations = 0;
  std::string error;
};

/// Converged iterate_signal efficiency per (control power, depth) with spin
/// decay active in all three stages. Points run in parallel up to `jobs`;
/// per-point failures are recorded and the scan continues.
std::vector<ScanPoint> efficiency_vs_depth_scan(const std::vector<double>& control_powers_mW,
                                                const std::vector<double>& alpha_L_values,
                                                double gamma_s, double tau,
                                                const MediumParams& m_template,
                                                const SolverGrid& grid, int jobs = 1);

/// Default starting pulse for the iteration: a rounded step spanning the last
/// 2.5 group delays of the writing window.
SampledPulse default_iteration_seed(const MediumParams& m, double rabi, double window_us,
                                    double nt_per_us);

}  // namespace eitmem

#endif  // EITMEM_OPTIMIZER_HPP
