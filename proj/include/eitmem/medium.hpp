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

#ifndef EITMEM_MEDIUM_HPP
#define EITMEM_MEDIUM_HPP

#include <utility>
#include <vector>

namespace eitmem {

// Internal unit conventions: time in us, rates in rad/us, z normalized to [0,1].
// Conversions to SI happen only at the interfaces that name SI units.

inline constexpr double kLightSpeed = 2.99792458e8;  // m/s

/// Lambda-system ensemble parameters. gamma is the optical-polarization HWHM
/// decay rate (a pressure-broadened linewidth 2*gamma = 2pi x 290 MHz is
/// stored as gamma = 2pi x 145 MHz in rad/us).
struct MediumParams {
  double alpha_L = 24.0;      // dimensionless optical depth (intensity exponent)
  double gamma = 0.0;         // rad/us
  double gamma_s = 0.0;       // rad/us
  double length = 0.075;      // m
  double light_speed = kLightSpeed;  // m/s

  void validate() const;  // throws ParameterError
};

/// Defaults matching the lab situation: 2*gamma = 2pi x 290 MHz,
/// 1/(2*gamma_s) = 500 us, L = 75 mm.
MediumParams default_medium(double alpha_L);

/// Reference points tying lab knobs (cell temperature, control power) to the
/// model parameters (alpha_L, Rabi frequency).
struct CalibrationAnchors {
  double anchor_temperature_C = 60.5;
  double anchor_alpha_L = 24.0;
  double anchor_power_mW = 16.0;
  double anchor_rabi = 0.0;  // rad/us; defaults() sets 2pi x 6.13

  // strictly monotone (temperature C, relative vapor density) table
  std::vector<std::pair<double, double>> density_vs_temperature;

  static CalibrationAnchors defaults();
  double relative_density(double temperature_C) const;  // RangeError outside table
};

/// Coupling constant g*sqrt(N) = sqrt(gamma * alpha * c / 2) in SI rad/s units
/// (gamma converted from the stored rad/us). Satisfies
/// (g sqrt N)^2 * 2L/(gamma c) = alpha_L identically.
double derive_coupling(const MediumParams& m);

/// EIT group velocity 2|Omega|^2/(alpha gamma) in m/s; rabi in rad/us.
double group_velocity(double rabi, const MediumParams& m);

/// Transparency-window width sqrt(alpha_L) * v_g / L in rad/s.
double eit_bandwidth(double rabi, const MediumParams& m);

/// Pulse delay across the medium, L/v_g, in us.
double group_delay_us(double rabi, const MediumParams& m);

/// Energy retained after a field-free storage interval: exp(-2 gamma_s tau).
double storage_decay_factor(const MediumParams& m, double tau_us);

/// (alpha_L, rabi rad/us) from cell temperature and control power. alpha_L
/// scales with relative vapor density; rabi scales as sqrt(power).
std::pair<double, double> calibrate(double temperature_C, double control_power_mW,
                                    const CalibrationAnchors& anchors);

/// Rabi frequency (rad/us) for a control power in mW via the default anchors.
double rabi_from_power_mW(double power_mW);

}  // namespace eitmem

#endif  // EITMEM_MEDIUM_HPP
