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

#ifndef EITMEM_IO_HPP
#define EITMEM_IO_HPP

#include <filesystem>
#include <string>

#include "eitmem/pulse.hpp"

namespace eitmem {

// Pulse CSV: header "t_us,re,im" (im optional on read); spin-wave CSV:
// "z_norm,re,im". Lines starting with '#' are metadata and skipped on read.
// Writers emit "# config_hash=<hex>" when a hash is supplied, and format
// numbers with %.12g so reruns are byte-identical.

void write_pulse_csv(const std::filesystem::path& path, const SampledPulse& p,
                     const std::string& config_hash = {});
SampledPulse read_pulse_csv(const std::filesystem::path& path);

void write_spinwave_csv(const std::filesystem::path& path, const SpinWave& s,
                        const std::string& config_hash = {});
SpinWave read_spinwave_csv(const std::filesystem::path& path);

/// FNV-1a 64-bit hex digest of a string (used for config hashes).
std::string fnv1a_hex(const std::string& data);

std::string format_g12(double v);

}  // namespace eitmem

#endif  // EITMEM_IO_HPP
