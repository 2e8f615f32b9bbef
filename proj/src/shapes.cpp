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

#include "eitmem/shapes.hpp"

#include <cmath>
#include <functional>

#include "eitmem/errors.hpp"

namespace eitmem {

namespace {
SampledPulse sample_shape(double duration, double nt_per_us,
                          const std::function<double(double)>& f) {
  if (!(duration > 0.0)) throw ParameterError("shape duration must be > 0");
  const auto n = std::size_t(std::ceil(duration * nt_per_us)) + 1;
  std::vector<cxd> s(std::max<std::size_t>(n, 2));
  const double h = duration / double(s.size() - 1);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = f(-duration + h * double(i));
  return normalize(SampledPulse(-duration, 0.0, std::move(s)));
}
}  // namespace

SampledPulse make_gaussian(double T, double nt_per_us) {
  return sample_shape(T, nt_per_us, [T](double t) {
    const double x = (t + 0.5 * T) / (T / 8.0);
    return std::exp(-0.5 * x * x);
  });
}

SampledPulse make_rounded_step(double T, double nt_per_us) {
  const double rise = 0.15 * T;
  return sample_shape(T, nt_per_us, [T, rise](double t) {
    const double x = std::min((t + T) / rise, 1.0);
    return x * x * (3.0 - 2.0 * x);
  });
}

SampledPulse make_sinc_segment(double T, double nt_per_us) {
  // amplitude envelope of a sinc segment; nonnegative, as a detected envelope
  return sample_shape(T, nt_per_us, [T](double t) {
    const double x = (t + 0.62 * T) / (0.11 * T);
    return std::abs(std::abs(x) < 1e-9 ? 1.0 : std::sin(x) / x);
  });
}

SampledPulse make_descending_ramp(double T, double nt_per_us) {
  return sample_shape(T, nt_per_us, [T](double t) { return -t / T; });
}

SampledPulse make_shape(const std::string& name, double duration_us, double nt_per_us) {
  if (name == "gaussian") return make_gaussian(duration_us, nt_per_us);
  if (name == "rounded_step") return make_rounded_step(duration_us, nt_per_us);
  if (name == "sinc_segment") return make_sinc_segment(duration_us, nt_per_us);
  if (name == "descending_ramp") return make_descending_ramp(duration_us, nt_per_us);
  throw ParameterError("unknown shape '" + name +
                       "' (expected gaussian|rounded_step|sinc_segment|descending_ramp)");
}

}  // namespace eitmem
