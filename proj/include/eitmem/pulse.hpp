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

#ifndef EITMEM_PULSE_HPP
#define EITMEM_PULSE_HPP

#include <complex>
#include <optional>
#include <vector>

namespace eitmem {

using cxd = std::complex<double>;

/// Complex envelope on a uniform time grid over [t_start, t_end] (us).
/// Zero outside its window by definition.
struct SampledPulse {
  double t_start = 0.0;
  double t_end = 0.0;
  std::vector<cxd> samples;

  SampledPulse() = default;
  SampledPulse(double t0, double t1, std::vector<cxd> s);

  std::size_t size() const { return samples.size(); }
  double dt() const { return (t_end - t_start) / double(samples.size() - 1); }
  double time_at(std::size_t i) const { return t_start + dt() * double(i); }
  cxd value_at(double t) const;  // linear interpolation, zero outside

  void validate() const;  // throws ParameterError on a malformed grid
};

/// Spin coherence S(z) sampled uniformly over normalized z in [0,1].
struct SpinWave {
  std::vector<cxd> samples;

  SpinWave() = default;
  explicit SpinWave(std::vector<cxd> s) : samples(std::move(s)) {}
  static SpinWave zero(std::size_t n) { return SpinWave(std::vector<cxd>(n)); }

  std::size_t size() const { return samples.size(); }
  double dz() const { return 1.0 / double(samples.size() - 1); }
  void validate() const;
};

struct Interval {
  double lo, hi;
};

SampledPulse time_reverse(const SampledPulse& p);

/// Rescale so that the trapezoidal integral of |E|^2 dt equals 1 (t in us).
SampledPulse normalize(const SampledPulse& p);

/// Trapezoidal integral of |E|^2 over the window (or a sub-window of it).
double energy(const SampledPulse& p, std::optional<Interval> sub_window = std::nullopt);

/// Normalized shape agreement |<a,b>|^2 / (|a|^2 |b|^2) in [0,1]; the pulses
/// are brought onto a common grid (the finer spacing, union window) first.
double overlap(const SampledPulse& a, const SampledPulse& b);

/// Sample onto a new window/grid; linear interpolation inside the original
/// window, zero outside.
SampledPulse resample(const SampledPulse& p, std::size_t n, Interval window);

/// Same samples, window translated by delta_t.
SampledPulse shift_window(const SampledPulse& p, double delta_t);

/// Constant-amplitude pulse (handy for flat control fields).
SampledPulse constant_pulse(double t0, double t1, double amplitude, std::size_t n);

double spin_norm2(const SpinWave& s);  // trapezoidal integral of |S|^2 dz
SpinWave spin_scale(const SpinWave& s, cxd factor);
double spin_overlap(const SpinWave& a, const SpinWave& b);
SpinWave spin_flip(const SpinWave& s);  // z -> 1-z

}  // namespace eitmem

#endif  // EITMEM_PULSE_HPP
