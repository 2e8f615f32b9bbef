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

#ifndef EITMEM_SHAPES_HPP
#define EITMEM_SHAPES_HPP

#include <string>

#include "eitmem/pulse.hpp"

namespace eitmem {

// Built-in unit-energy signal shapes on [-duration, 0].

SampledPulse make_gaussian(double duration_us, double nt_per_us);
SampledPulse make_rounded_step(double duration_us, double nt_per_us);
SampledPulse make_sinc_segment(double duration_us, double nt_per_us);
SampledPulse make_descending_ramp(double duration_us, double nt_per_us);

/// Lookup by name: gaussian | rounded_step | sinc_segment | descending_ramp.
/// Throws ParameterError for unknown names.
SampledPulse make_shape(const std::string& name, double duration_us, double nt_per_us);

}  // namespace eitmem

#endif  // EITMEM_SHAPES_HPP
