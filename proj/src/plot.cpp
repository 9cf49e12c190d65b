// Copyright 2026 The EvoNet Authors
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

#include "evonet/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "evonet/errors.hpp"

namespace evonet::plot {
namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;
const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

Frame fit_frame(const std::vector<Series>& series) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!std::isfinite(x0)) return {0, 1, 0, 1};
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  return {x0, x1, y0, y1};
}

void header(std::ostringstream& out, const Axes& axes, const Frame& f) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(axes.title) << "</text>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight
      << "\" y2=\"" << kHeight - kBottom << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kHeight - kBottom << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = f.x0 + (f.x1 - f.x0) * k / 4, yv = f.y0 + (f.y1 - f.y0) * k / 4;
    out << "<text x=\"" << f.px(xv) << "\" y=\"" << kHeight - kBottom + 16
        << "\" text-anchor=\"middle\">" << xv << "</text>\n"
        << "<text x=\"" << kLeft - 6 << "\" y=\"" << f.py(yv) + 4 << "\" text-anchor=\"end\">" << yv
        << "</text>\n";
  }
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
      << escape(axes.x_label) << "</text>\n"
      << "<text x=\"16\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << kHeight / 2 << ")\">" << escape(axes.y_label) << "</text>\n";
}

void legend(std::ostringstream& out, const std::vector<Series>& series) {
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto color = series[k].color.empty() ? kPalette[k % 6] : series[k].color;
    const double y = kTop + 4 + 16.0 * k;
    out << "<rect x=\"" << kWidth - kRight - 130 << "\" y=\"" << y << "\" width=\"10\" height=\"10\" fill=\""
        << color << "\"/>\n<text x=\"" << kWidth - kRight - 114 << "\" y=\"" << y + 9 << "\">"
        << escape(series[k].label) << "</text>\n";
  }
}

}  // namespace

std::string line_chart(const Axes& axes, const std::vector<Series>& series) {
  const Frame f = fit_frame(series);
  std::ostringstream out;
  header(out, axes, f);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    out << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\""
        << (s.color.empty() ? kPalette[k % 6] : s.color) << "\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      out << f.px(s.x[i]) << ',' << f.py(s.y[i]) << ' ';
    out << "\"/>\n";
  }
  legend(out, series);
  out << "</svg>\n";
  return out.str();
}

std::string scatter_chart(const Axes& axes, const std::vector<Series>& series) {
  const Frame f = fit_frame(series);
  std::ostringstream out;
  header(out, axes, f);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const auto color = s.color.empty() ? kPalette[k % 6] : s.color;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      out << "<circle r=\"3\" fill=\"" << color << "\" cx=\"" << f.px(s.x[i]) << "\" cy=\""
          << f.py(s.y[i]) << "\"/>\n";
  }
  legend(out, series);
  out << "</svg>\n";
  return out.str();
}

std::string histogram_chart(const Axes& axes, const std::vector<int>& counts, double lo, double hi) {
  int top = 1;
  for (int c : counts) top = std::max(top, c);
  const Frame f{lo, hi, 0, static_cast<double>(top)};
  std::ostringstream out;
  header(out, axes, f);
  const double width = (hi - lo) / std::max<std::size_t>(1, counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double x = lo + width * i;
    out << "<rect fill=\"" << kPalette[0] << "\" stroke=\"white\" x=\"" << f.px(x) << "\" y=\""
        << f.py(counts[i]) << "\" width=\"" << f.px(x + width) - f.px(x) << "\" height=\""
        << f.py(0) - f.py(counts[i]) << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << text;
  if (!out) throw DataError("failed writing " + path);
}

}  // namespace evonet::plot
