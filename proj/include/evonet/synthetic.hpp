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

#include <string>
#include <string_view>

#include "evonet/graph.hpp"

namespace evonet {

enum class Family { path, cycle, ladder };
enum class GrowthMode { grow, grow_with_removal };

struct SyntheticScenario {
  Family family = Family::path;
  GrowthMode mode = GrowthMode::grow;
  int steps = 1000;
};

Family parse_family(std::string_view name);
GrowthMode parse_growth_mode(std::string_view name);
std::string to_string(Family family);
std::string to_string(GrowthMode mode);

// Every generator returns `steps` snapshots (t = 0 .. steps-1). Node ids are
// creation counters, so the registry order is creation order. All snapshots
// carry degree node attributes and constant edge attributes.

/// P3 at t = 0, one node appended to the tail per step. In removal mode the
/// head node is dropped instead of adding whenever t > 0 and t % 3 == 0.
GraphSequence gen_path_sequence(int steps, GrowthMode mode);

/// C3 at t = 0; the new node is bridged between the first and last nodes.
/// In removal mode, steps with t % 3 == 0 additionally drop the first node
/// and reclose the cycle between the second and the last node.
GraphSequence gen_cycle_sequence(int steps, GrowthMode mode);

/// L2 at t = 0; one rung appended per step, so step t holds L_{2+t}.
GraphSequence gen_ladder_sequence(int steps);

GraphSequence generate(const SyntheticScenario& scenario);

}  // namespace evonet
