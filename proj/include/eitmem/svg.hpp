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

#ifndef EITMEM_SVG_HPP
#define EITMEM_SVG_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace eitmem {

// Minimal deterministic SVG line plots; enough for the protocol/iteration/scan
// figures without an external plotting dependency.

struct SvgSeries {
  std::vector<double> x, y;
  std::string color = "#000000";
  std::string label;
  double width = 1.3;
  bool dashed = false;
};

struct SvgAxes {
  std::string title, xlabel, ylabel;
  std::vector<SvgSeries> series;
  bool log_x = false;
};

/// One axes panel rendered to `path`.
void write_svg_plot(const std::filesystem::path& path, const SvgAxes& axes,
                    int width = 760, int height = 420);

/// Grid of panels (row-major), e.g. per-iteration input/output columns.
void write_svg_grid(const std::filesystem::path& path, const std::vector<SvgAxes>& panels,
                    int ncols, int panel_width = 380, int panel_height = 240);

}  // namespace eitmem

#endif  // EITMEM_SVG_HPP
