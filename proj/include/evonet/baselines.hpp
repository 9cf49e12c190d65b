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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evonet/graph.hpp"
#include "evonet/kernels.hpp"
#include "evonet/nn.hpp"
#include "evonet/predictor.hpp"

namespace evonet {

enum class BaselineKind { er, sbm, ba, power, kron_rand, kron_fix };

/// Accepts "er", "sbm", "ba", "power", "kron-rand"/"kron_rand", "kron-fix"/"kron_fix".
BaselineKind parse_baseline_kind(const std::string& s);
std::string to_string(BaselineKind k);  // hyphenated CLI spelling
const std::vector<BaselineKind>& all_baseline_kinds();

/// Next-step (node, edge) count estimator shared by every baseline: an MLP
/// over the same relative-difference features as the model's size head, with
/// one output per quantity.
class SizeEstimator {
 public:
  SizeEstimator(int window, int hidden, std::uint64_t seed);

  /// Full-batch Adam on every window of `history` (targets index w..end).
  void fit(std::span<const SizePoint> history, int iterations = 400, double step_size = 1e-2);

  /// Clamped to n >= 1 and 0 <= m <= n(n-1)/2. Needs exactly w entries.
  SizePoint estimate(std::span<const SizePoint> window) const;

  int window() const { return window_; }

 private:
  int window_;
  nn::ParamStore store_;
  nn::Mlp mlp_;
  SizeScales scales_;
};

/// Clamps raw estimates into the simple-graph range.
SizePoint clamp_targets(double nodes, double edges);

/// G(n, p) with p = m / C(n, 2). Throws ConfigError unless 0 <= m <= C(n, 2).
Graph generate_er(int n, long long m, std::uint64_t seed,
                  kernels::Exec exec = kernels::Exec::parallel);
/// Throws ConfigError unless p in [0, 1] and n >= 1.
Graph generate_er_p(int n, double p, std::uint64_t seed,
                    kernels::Exec exec = kernels::Exec::parallel);

struct SbmFit {
  std::vector<int> block;  // per node of the fitted snapshot, 0 or 1
  double block0_fraction = 0;
  double p00 = 0, p11 = 0, p01 = 0;
  double density = 0;  // overall density, used by the ER fallback
  bool degenerate = false;
};

/// Fiedler vector by deflated power iteration, split by sign.
std::vector<double> fiedler_vector(const Graph& g, int iterations = 500);
SbmFit fit_sbm(const Graph& history);
/// First round(f0 * n) nodes form block 0. Degenerate fits sample G(n, density).
Graph generate_sbm(int n, const Graph& history, std::uint64_t seed,
                   kernels::Exec exec = kernels::Exec::parallel);
Graph sample_sbm(int n, const SbmFit& fit, std::uint64_t seed,
                 kernels::Exec exec = kernels::Exec::parallel);

enum class BaVariant { ba, power };

/// Preferential attachment from the triangle {0,1,2}; node v attaches to
/// min(m_per_node, v) distinct existing nodes. `power` closes a triad through
/// a random neighbour of each chosen target with probability 0.1.
/// Throws ConfigError for n < 3 or m_per_node < 1.
Graph generate_ba(int n, int m_per_node, std::uint64_t seed, BaVariant variant = BaVariant::ba);

/// Symmetric initiator [[a, b], [b, c]].
struct Initiator {
  double a = 0.9, b = 0.5, c = 0.1;
  double at(int i, int j) const { return i == 0 ? (j == 0 ? a : b) : (j == 0 ? b : c); }
  friend bool operator==(const Initiator&, const Initiator&) = default;
};

int kronecker_power(int n);  // ceil(log2 n)
/// Edge probability of (u, v) in the k-th Kronecker power.
double kronecker_probability(const Initiator& theta, int k, int u, int v);
/// Sum over v < n of P(u, v) minus P(u, u), by a digit recursion over bits.
double kronecker_expected_degree(const Initiator& theta, int k, int n, int u);

struct KroneckerMoments {
  double density = 0;
  double degree_variance = 0;
};
KroneckerMoments kronecker_moments(const Initiator& theta, int n);

/// Grid search (step 0.05) minimising |density - target| + |degree variance - target|
/// over the expected degrees of the truncated n-node model. Ties keep the first grid point.
Initiator fit_kronecker(const Graph& history);

/// Throws ConfigError for n < 2 or entries outside [0, 1].
Graph generate_kronecker(int n, const Initiator& theta, std::uint64_t seed,
                         kernels::Exec exec = kernels::Exec::parallel);

/// Dispatches one baseline for target size (n, m) given the last observed snapshot.
/// Sizes are raised to each generator's minimum (3 for BA, 2 for Kronecker).
Graph generate_baseline(BaselineKind kind, SizePoint target, const Graph& history,
                        std::uint64_t seed);

}  // namespace evonet
