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

#include "eitmem/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "eitmem/errors.hpp"
#include "eitmem/io.hpp"

namespace eitmem {

namespace {

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void include(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void pad() {
    if (!(hi > lo)) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double m = 0.04 * (hi - lo);
    lo -= m;
    hi += m;
  }
};

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

void render_axes(std::ostringstream& out, const SvgAxes& ax, double x0, double y0, double w,
                 double h) {
  const double ml = 52, mr = 12, mt = 24, mb = 36;
  const double px = x0 + ml, py = y0 + mt, pw = w - ml - mr, ph = h - mt - mb;

  Range rx, ry;
  for (const auto& s : ax.series) {
    for (double v : s.x) rx.include(ax.log_x ? std::log10(std::max(v, 1e-300)) : v);
    for (double v : s.y) ry.include(v);
  }
  if (!std::isfinite(rx.lo) || !std::isfinite(ry.lo)) {
    rx.include(0.0);
    rx.include(1.0);
    ry.include(0.0);
    ry.include(1.0);
  }
  rx.pad();
  ry.pad();

  auto X = [&](double v) {
    const double t = ax.log_x ? std::log10(std::max(v, 1e-300)) : v;
    return px + (t - rx.lo) / (rx.hi - rx.lo) * pw;
  };
  auto Y = [&](double v) { return py + (ry.hi - v) / (ry.hi - ry.lo) * ph; };

  out << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"white\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
  out << "<text x=\"" << x0 + w / 2 << "\" y=\"" << y0 + 15
      << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" << ax.title
      << "</text>\n";

  for (int i = 0; i <= 4; ++i) {
    const double fx = rx.lo + (rx.hi - rx.lo) * i / 4.0;
    const double vx = ax.log_x ? std::pow(10.0, fx) : fx;
    const double sx = px + pw * i / 4.0;
    out << "<line x1=\"" << sx << "\" y1=\"" << py + ph << "\" x2=\"" << sx << "\" y2=\""
        << py + ph + 4 << "\" stroke=\"#444444\"/>\n";
    out << "<text x=\"" << sx << "\" y=\"" << py + ph + 16
        << "\" text-anchor=\"middle\" font-size=\"10\" font-family=\"sans-serif\">" << fmt_tick(vx)
        << "</text>\n";
    const double vy = ry.lo + (ry.hi - ry.lo) * i / 4.0;
    const double sy = Y(vy);
    out << "<line x1=\"" << px - 4 << "\" y1=\"" << sy << "\" x2=\"" << px << "\" y2=\"" << sy
        << "\" stroke=\"#444444\"/>\n";
    out << "<text x=\"" << px - 6 << "\" y=\"" << sy + 3
        << "\" text-anchor=\"end\" font-size=\"10\" font-family=\"sans-serif\">" << fmt_tick(vy)
        << "</text>\n";
  }
  out << "<text x=\"" << px + pw / 2 << "\" y=\"" << py + ph + 30
      << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << ax.xlabel
      << "</text>\n";
  out << "<text x=\"" << x0 + 13 << "\" y=\"" << py + ph / 2
      << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\" transform=\"rotate(-90 "
      << x0 + 13 << " " << py + ph / 2 << ")\">" << ax.ylabel << "</text>\n";

  double ly = py + 12;
  for (const auto& s : ax.series) {
    if (s.x.size() < 2) continue;
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"" << s.width
        << "\"";
    if (s.dashed) out << " stroke-dasharray=\"6 4\"";
    out << " points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double sx = std::clamp(X(s.x[i]), px - 2, px + pw + 2);
      const double sy = std::clamp(Y(s.y[i]), py - 2, py + ph + 2);
      out << format_g12(std::round(sx * 100) / 100) << "," << format_g12(std::round(sy * 100) / 100)
          << " ";
    }
    out << "\"/>\n";
    if (!s.label.empty()) {
      out << "<line x1=\"" << px + pw - 86 << "\" y1=\"" << ly - 3 << "\" x2=\"" << px + pw - 64
          << "\" y2=\"" << ly - 3 << "\" stroke=\"" << s.color << "\" stroke-width=\"" << s.width
          << "\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
      out << "<text x=\"" << px + pw - 60 << "\" y=\"" << ly
          << "\" font-size=\"10\" font-family=\"sans-serif\">" << s.label << "</text>\n";
      ly += 13;
    }
  }
}

void write_doc(const std::filesystem::path& path, int w, int h, const std::string& body) {
  std::ofstream f(path);
  if (!f) throw RangeError("cannot write " + path.string());
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
    << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << body << "</svg>\n";
}

}  // namespace

void write_svg_plot(const std::filesystem::path& path, const SvgAxes& axes, int width,
                    int height) {
  std::ostringstream body;
  render_axes(body, axes, 0, 0, width, height);
  write_doc(path, width, height, body.str());
}

void write_svg_grid(const std::filesystem::path& path, const std::vector<SvgAxes>& panels,
                    int ncols, int panel_width, int panel_height) {
  if (panels.empty() || ncols < 1) throw ParameterError("svg grid needs panels and ncols >= 1");
  const int nrows = int((panels.size() + std::size_t(ncols) - 1) / std::size_t(ncols));
  std::ostringstream body;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const int r = int(i) / ncols, c = int(i) % ncols;
    render_axes(body, panels[i], c * panel_width, r * panel_height, panel_width, panel_height);
  }
  write_doc(path, ncols * panel_width, nrows * panel_height, body.str());
}

}  // namespace eitmem
