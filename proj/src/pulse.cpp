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

#include "eitmem/pulse.hpp"

#include <algorithm>
#include <cmath>

#include "eitmem/errors.hpp"

namespace eitmem {

namespace {
double sqr_abs(cxd v) { return std::norm(v); }

bool all_finite(const std::vector<cxd>& v) {
  for (const auto& x : v)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  return true;
}
}  // namespace

SampledPulse::SampledPulse(double t0, double t1, std::vector<cxd> s)
    : t_start(t0), t_end(t1), samples(std::move(s)) {
  validate();
}

void SampledPulse::validate() const {
  if (samples.size() < 2) throw ParameterError("SampledPulse needs >= 2 samples");
  if (!(t_end > t_start)) throw ParameterError("SampledPulse window must have positive length");
  if (!all_finite(samples)) throw ParameterError("SampledPulse has non-finite samples");
}

cxd SampledPulse::value_at(double t) const {
  if (t < t_start || t > t_end) return {0.0, 0.0};
  const double x = (t - t_start) / dt();
  const auto i = std::min<std::size_t>(std::size_t(x), samples.size() - 2);
  const double f = x - double(i);
  return samples[i] * (1.0 - f) + samples[i + 1] * f;
}

void SpinWave::validate() const {
  if (samples.size() < 2) throw ParameterError("SpinWave needs >= 2 samples");
  if (!all_finite(samples)) throw ParameterError("SpinWave has non-finite samples");
}

SampledPulse time_reverse(const SampledPulse& p) {
  p.validate();
  SampledPulse r = p;
  std::reverse(r.samples.begin(), r.samples.end());
  return r;
}

double energy(const SampledPulse& p, std::optional<Interval> sub_window) {
  p.validate();
  const double h = p.dt();
  if (!sub_window) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < p.samples.size(); ++i)
      acc += 0.5 * h * (sqr_abs(p.samples[i]) + sqr_abs(p.samples[i + 1]));
    return acc;
  }
  const double eps = 1e-9 * (p.t_end - p.t_start);
  double lo = sub_window->lo, hi = sub_window->hi;
  if (lo < p.t_start - eps || hi > p.t_end + eps || hi < lo)
    throw RangeError("energy sub-window outside pulse window");
  lo = std::max(lo, p.t_start);
  hi = std::min(hi, p.t_end);
  // trapezoid over interior samples plus interpolated boundary fragments
  double acc = 0.0;
  const auto ilo = std::size_t(std::ceil((lo - p.t_start) / h - 1e-12));
  const auto ihi = std::size_t(std::floor((hi - p.t_start) / h + 1e-12));
  if (ilo > ihi) {  // sub-window inside one cell
    return 0.5 * (hi - lo) * (sqr_abs(p.value_at(lo)) + sqr_abs(p.value_at(hi)));
  }
  for (std::size_t i = ilo; i < ihi; ++i)
    acc += 0.5 * h * (sqr_abs(p.samples[i]) + sqr_abs(p.samples[i + 1]));
  const double tlo_grid = p.time_at(ilo), thi_grid = p.time_at(ihi);
  if (tlo_grid > lo)
    acc += 0.5 * (tlo_grid - lo) * (sqr_abs(p.value_at(lo)) + sqr_abs(p.samples[ilo]));
  if (hi > thi_grid)
    acc += 0.5 * (hi - thi_grid) * (sqr_abs(p.samples[ihi]) + sqr_abs(p.value_at(hi)));
  return acc;
}

SampledPulse normalize(const SampledPulse& p) {
  const double en = energy(p);
  if (!(en > 0.0) || !std::isfinite(en))
    throw DegenerateInputError("cannot normalize a zero-energy pulse");
  SampledPulse r = p;
  const double s = 1.0 / std::sqrt(en);
  for (auto& v : r.samples) v *= s;
  return r;
}

SampledPulse resample(const SampledPulse& p, std::size_t n, Interval window) {
  p.validate();
  if (n < 2) throw ParameterError("resample needs n >= 2");
  if (!(window.hi > window.lo)) throw ParameterError("resample window must have positive length");
  SampledPulse r;
  r.t_start = window.lo;
  r.t_end = window.hi;
  r.samples.resize(n);
  const double h = (window.hi - window.lo) / double(n - 1);
  for (std::size_t i = 0; i < n; ++i) r.samples[i] = p.value_at(window.lo + h * double(i));
  return r;
}

SampledPulse shift_window(const SampledPulse& p, double delta_t) {
  SampledPulse r = p;
  r.t_start += delta_t;
  r.t_end += delta_t;
  return r;
}

SampledPulse constant_pulse(double t0, double t1, double amplitude, std::size_t n) {
  return SampledPulse(t0, t1, std::vector<cxd>(n, cxd(amplitude, 0.0)));
}

double overlap(const SampledPulse& a, const SampledPulse& b) {
  const double ea = energy(a), eb = energy(b);
  if (!(ea > 0.0) || !(eb > 0.0))
    throw DegenerateInputError("overlap undefined for zero-energy pulses");
  const double lo = std::min(a.t_start, b.t_start);
  const double hi = std::max(a.t_end, b.t_end);
  const double h = std::min(a.dt(), b.dt());
  const auto n = std::size_t(std::ceil((hi - lo) / h)) + 1;
  const SampledPulse ra = resample(a, n, {lo, hi});
  const SampledPulse rb = resample(b, n, {lo, hi});
  cxd ip{0.0, 0.0};
  double na = 0.0, nb = 0.0;
  const double hh = ra.dt();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 * hh : hh;
    ip += w * std::conj(ra.samples[i]) * rb.samples[i];
    na += w * sqr_abs(ra.samples[i]);
    nb += w * sqr_abs(rb.samples[i]);
  }
  if (!(na > 0.0) || !(nb > 0.0)) return 0.0;
  return std::min(1.0, std::norm(ip) / (na * nb));
}

double spin_norm2(const SpinWave& s) {
  s.validate();
  const double h = s.dz();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < s.samples.size(); ++i)
    acc += 0.5 * h * (sqr_abs(s.samples[i]) + sqr_abs(s.samples[i + 1]));
  return acc;
}

SpinWave spin_scale(const SpinWave& s, cxd factor) {
  SpinWave r = s;
  for (auto& v : r.samples) v *= factor;
  return r;
}

double spin_overlap(const SpinWave& a, const SpinWave& b) {
  a.validate();
  b.validate();
  if (a.size() != b.size())
    throw ParameterError("spin_overlap requires matching grids");
  cxd ip{0.0, 0.0};
  double na = 0.0, nb = 0.0;
  const double h = a.dz();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double w = (i == 0 || i + 1 == a.size()) ? 0.5 * h : h;
    ip += w * std::conj(a.samples[i]) * b.samples[i];
    na += w * sqr_abs(a.samples[i]);
    nb += w * sqr_abs(b.samples[i]);
  }
  if (!(na > 0.0) || !(nb > 0.0))
    throw DegenerateInputError("spin_overlap undefined for zero spin waves");
  return std::min(1.0, std::norm(ip) / (na * nb));
}

SpinWave spin_flip(const SpinWave& s) {
  SpinWave r = s;
  std::reverse(r.samples.begin(), r.samples.end());
  return r;
}

}  // namespace eitmem
