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

#pragma once

// Minimal dependency-free SVG charts for experiment artifacts.

#include <array>
#include <string>
#include <vector>

namespace evonet::plot {

struct Series {
  std::string label;
  std::vector<double> x, y;
  std::string color;
};

struct Axes {
  std::string title, x_label, y_label;
};

std::string line_chart(const Axes& axes, const std::vector<Series>& series);
std::string scatter_chart(const Axes& axes, const std::vector<Series>& series);
/// Bars over equal-width bins spanning [lo, hi].
std::string histogram_chart(const Axes& axes, const std::vector<int>& counts, double lo, double hi);

void write_text(const std::string& path, const std::string& text);

}  // namespace evonet::plot
