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

#include "eitmem/medium.hpp"

#include <cmath>

#include "eitmem/errors.hpp"

namespace eitmem {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kBoltzmann = 1.380649e-23;  // J/K

// Saturated vapor pressure of liquid Rb (Alcock-style fit), torr.
double rb_vapor_pressure_torr(double temperature_C) {
  const double T = temperature_C + 273.15;
  const double log10p = 15.88253 - 4529.635 / T + 0.00058663 * T - 2.99138 * std::log10(T);
  return std::pow(10.0, log10p);
}

// Number density in m^-3.
double rb_density(double temperature_C) {
  const double T = temperature_C + 273.15;
  return rb_vapor_pressure_torr(temperature_C) * 133.322 / (kBoltzmann * T);
}
}  // namespace

void MediumParams::validate() const {
  if (!(alpha_L >= 0.0) || !std::isfinite(alpha_L))
    throw ParameterError("MediumParams.alpha_L must be >= 0");
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw ParameterError("MediumParams.gamma must be > 0");
  if (!(gamma_s >= 0.0) || !std::isfinite(gamma_s))
    throw ParameterError("MediumParams.gamma_s must be >= 0");
  if (!(length > 0.0) || !std::isfinite(length))
    throw ParameterError("MediumParams.length must be > 0");
  if (!(light_speed > 0.0))
    throw ParameterError("MediumParams.light_speed must be > 0");
}

MediumParams default_medium(double alpha_L) {
  MediumParams m;
  m.alpha_L = alpha_L;
  m.gamma = kTwoPi * 145.0;   // rad/us, half of the 2pi x 290 MHz linewidth
  m.gamma_s = 1.0 / 1000.0;   // rad/us, 1/(2 gamma_s) = 500 us
  m.length = 0.075;
  return m;
}

CalibrationAnchors CalibrationAnchors::defaults() {
  CalibrationAnchors a;
  a.anchor_rabi = kTwoPi * 6.13;  // rad/us at 16 mW
  const double n_ref = rb_density(a.anchor_temperature_C);
  for (double T = 40.0; T <= 80.0 + 1e-9; T += 0.5) {
    a.density_vs_temperature.emplace_back(T, rb_density(T) / n_ref);
  }
  return a;
}

double CalibrationAnchors::relative_density(double temperature_C) const {
  const auto& tab = density_vs_temperature;
  if (tab.size() < 2) throw ParameterError("CalibrationAnchors: density table missing");
  if (temperature_C < tab.front().first || temperature_C > tab.back().first)
    throw RangeError("temperature " + std::to_string(temperature_C) +
                     " C outside tabulated range [" + std::to_string(tab.front().first) + ", " +
                     std::to_string(tab.back().first) + "]");
  for (std::size_t i = 1; i < tab.size(); ++i) {
    if (temperature_C <= tab[i].first) {
      const double f = (temperature_C - tab[i - 1].first) / (tab[i].first - tab[i - 1].first);
      return tab[i - 1].second + f * (tab[i].second - tab[i - 1].second);
    }
  }
  return tab.back().second;
}

double derive_coupling(const MediumParams& m) {
  m.validate();
  const double gamma_si = m.gamma * 1e6;              // rad/s
  const double alpha = m.alpha_L / m.length;          // 1/m
  return std::sqrt(gamma_si * alpha * m.light_speed / 2.0);
}

double group_velocity(double rabi, const MediumParams& m) {
  m.validate();
  if (m.alpha_L <= 0.0)
    throw ParameterError("group_velocity undefined at alpha_L = 0");
  const double alpha = m.alpha_L / m.length;
  // rates in rad/us cancel; result carries m/us -> m/s
  return 2.0 * rabi * rabi / (alpha * m.gamma) * 1e6;
}

double eit_bandwidth(double rabi, const MediumParams& m) {
  if (!(m.alpha_L > 0.0)) throw ParameterError("eit_bandwidth requires alpha_L > 0");
  return std::sqrt(m.alpha_L) * group_velocity(rabi, m) / m.length;
}

double group_delay_us(double rabi, const MediumParams& m) {
  if (rabi == 0.0) throw ParameterError("group_delay undefined at Omega = 0");
  return m.alpha_L * m.gamma / (2.0 * rabi * rabi);
}

double storage_decay_factor(const MediumParams& m, double tau_us) {
  m.validate();
  if (tau_us < 0.0) throw ParameterError("storage time must be >= 0");
  return std::exp(-2.0 * m.gamma_s * tau_us);
}

std::pair<double, double> calibrate(double temperature_C, double control_power_mW,
                                    const CalibrationAnchors& anchors) {
  if (control_power_mW < 0.0) throw ParameterError("control power must be >= 0");
  const double rel = anchors.relative_density(temperature_C) /
                     anchors.relative_density(anchors.anchor_temperature_C);
  const double alpha_L = anchors.anchor_alpha_L * rel;
  const double rabi = anchors.anchor_rabi * std::sqrt(control_power_mW / anchors.anchor_power_mW);
  return {alpha_L, rabi};
}

double rabi_from_power_mW(double power_mW) {
  if (power_mW < 0.0) throw ParameterError("control power must be >= 0");
  return kTwoPi * 6.13 * std::sqrt(power_mW / 16.0);
}

}  // namespace eitmem
