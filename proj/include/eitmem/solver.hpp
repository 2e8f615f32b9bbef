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

#ifndef EITMEM_SOLVER_HPP
#define EITMEM_SOLVER_HPP

#include "eitmem/medium.hpp"
#include "eitmem/pulse.hpp"

namespace eitmem {

// Retarded-frame integration of the three-level equations of motion
//
//   dP/dt = -gamma P + i C E + i Omega(t) S
//   dS/dt = -gamma_s S + i Omega(t) P
//   dE/dz = i C P,   E(0,t) = E_in(t)
//
// on z in [0,1] with C = sqrt(gamma alpha_L / 2). The field equation is a
// spatial quadrature at fixed t (the L/c transit is four orders of magnitude
// below pulse timescales). In adiabatic mode P is eliminated algebraically,
// P = i(C E + Omega S)/gamma, leaving a stiff-free system stepped with RK4;
// full mode retains P and caps the step at 0.1/gamma.

enum class SolverMode { adiabatic, full };

struct SolverGrid {
  int nz = 256;
  double nt_per_us = 100.0;
  SolverMode mode = SolverMode::adiabatic;

  void validate() const;  // nz >= 32, nt_per_us > 0
};

/// Optional dense capture of S(z,t) and E(z,t) at every major time step
/// (row-major nt x nz). Used by the adjoint-gradient control optimizer.
struct FieldRecord {
  std::size_t nt = 0, nz = 0;
  std::vector<double> times;
  std::vector<cxd> S;  // nt*nz
  std::vector<cxd> E;  // nt*nz
};

/// Optional strided snapshots of the optical polarization P(z,t).
struct PolarizationField {
  int stride = 64;  // capture every stride-th step
  std::vector<double> times;
  std::vector<std::vector<cxd>> snapshots;
};

struct PropagateResult {
  SampledPulse e_out;  // field at z=1 over the integration window
  SpinWave s_final;    // S(z) at the final time
};

struct ProtocolResult {
  SampledPulse leak;            // transmitted signal during writing (t < 0)
  SpinWave spin_after_write;    // S(z) at t = 0
  SpinWave spin_after_storage;  // S(z) at t = tau (decayed)
  SampledPulse retrieved;       // E_out at z=1 for t > tau
  double efficiency = 0.0;      // retrieved / input energy
  double leak_fraction = 0.0;
  double stored_fraction = 0.0;  // spin-wave energy at t=0 / input energy
};

/// Integrate one stage. e_in and control must share a window; s0 (resampled
/// to the grid if needed) seeds the spin wave. Throws NumericalError naming
/// the step if the state leaves the finite range.
PropagateResult propagate(const SampledPulse& e_in, const SampledPulse& control,
                          const MediumParams& m, const SpinWave& s0,
                          const SolverGrid& grid, FieldRecord* record = nullptr,
                          PolarizationField* polarization = nullptr);

/// Convert a stored spin wave back to light: propagate with zero input.
SampledPulse retrieve(const SpinWave& s, const SampledPulse& control,
                      const MediumParams& m, const SolverGrid& grid);

/// Writing -> field-free storage for tau (S *= exp(-gamma_s tau)) -> retrieval.
/// omega_write must share e_in's window and end at t=0; omega_read starts at
/// t=tau. Efficiency is the retrieved-to-input energy ratio (zero-input runs
/// report 0).
ProtocolResult run_protocol(const SampledPulse& e_in, const SampledPulse& omega_write,
                            const SampledPulse& omega_read, double tau,
                            const MediumParams& m, const SolverGrid& grid);

/// Retrieval-completion window: the pulse counts as fully extracted once
/// int Omega^2 dt >= 20 * (alpha_L gamma / 2), i.e. 20 group delays for a
/// constant control.
double completion_window_us(const MediumParams& m, double rabi);

}  // namespace eitmem

#endif  // EITMEM_SOLVER_HPP
