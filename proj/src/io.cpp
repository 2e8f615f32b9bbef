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

#include "eitmem/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "eitmem/errors.hpp"

namespace eitmem {

std::string format_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

void write_rows(std::ofstream& f, const std::string& header, const std::string& hash,
                const std::vector<double>& x, const std::vector<cxd>& v) {
  if (!hash.empty()) f << "# config_hash=" << hash << "\n";
  f << header << "\n";
  for (std::size_t i = 0; i < x.size(); ++i)
    f << format_g12(x[i]) << "," << format_g12(v[i].real()) << "," << format_g12(v[i].imag())
      << "\n";
}

struct CsvTable {
  std::vector<double> x;
  std::vector<cxd> v;
};

CsvTable read_rows(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw RangeError("cannot open CSV file: " + path.string());
  CsvTable out;
  std::string line;
  bool seen_header = false;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!seen_header) {  // header row required
      seen_header = true;
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    double cols[3] = {0.0, 0.0, 0.0};
    int n = 0;
    while (std::getline(ss, cell, ',') && n < 3) cols[n++] = std::stod(cell);
    if (n < 2) throw ParameterError("CSV row needs at least two columns in " + path.string());
    out.x.push_back(cols[0]);
    out.v.emplace_back(cols[1], cols[2]);
  }
  if (out.x.size() < 2) throw ParameterError("CSV in " + path.string() + " has fewer than 2 rows");
  return out;
}

}  // namespace

void write_pulse_csv(const std::filesystem::path& path, const SampledPulse& p,
                     const std::string& config_hash) {
  std::ofstream f(path);
  if (!f) throw RangeError("cannot write " + path.string());
  std::vector<double> t(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) t[i] = p.time_at(i);
  write_rows(f, "t_us,re,im", config_hash, t, p.samples);
}

SampledPulse read_pulse_csv(const std::filesystem::path& path) {
  const CsvTable tb = read_rows(path);
  return SampledPulse(tb.x.front(), tb.x.back(), tb.v);
}

void write_spinwave_csv(const std::filesystem::path& path, const SpinWave& s,
                        const std::string& config_hash) {
  std::ofstream f(path);
  if (!f) throw RangeError("cannot write " + path.string());
  std::vector<double> z(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) z[i] = s.dz() * double(i);
  write_rows(f, "z_norm,re,im", config_hash, z, s.samples);
}

SpinWave read_spinwave_csv(const std::filesystem::path& path) {
  return SpinWave(read_rows(path).v);
}

}  // namespace eitmem
