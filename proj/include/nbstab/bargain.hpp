// Copyright 2026 The nbstab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NBSTAB_BARGAIN_HPP
#define NBSTAB_BARGAIN_HPP

#include <optional>
#include <string>
#include <vector>

#include "nbstab/blockset.hpp"
#include "nbstab/graph.hpp"
#include "nbstab/lp.hpp"
#include "nbstab/rational.hpp"

namespace nbstab {

/// s_ij = max{1 - x_i - x_k : ik in E', k != j}, or -x_i when i has no other
/// neighbour. Either way the value is `constant - x(term)`.
struct PairSurplus {
  int from = 0;  // i
  int to = 0;    // j
  int edge = 0;  // ij
  Rational value;
  std::optional<int> via;  // k of the defining edge ik; empty for the singleton term {i}

  Rational constant() const { return via ? Rational(1) : Rational(0); }
  std::vector<int> term() const { return via ? std::vector<int>{from, *via} : std::vector<int>{from}; }
};

struct SurplusState {
  /// Two entries per edge: 2e is (u -> v), 2e+1 is (v -> u) for edge e = uv.
  std::vector<PairSurplus> pairs;
  /// Edges sorted by max(s_ij, s_ji) descending, then edge index.
  std::vector<int> order;
  /// First violated edge in `order`, as the pair index of its larger side.
  std::optional<int> top_violated;
  Rational s_max;      // s(x); 0 when nothing is violated
  Rational delta_cap;  // smallest key over S(x); 0 if S(x) is empty
  std::vector<int> s_set;  // edges with key > s(x)
  std::vector<int> i_set;  // edges with key == s(x)

  bool violated() const { return top_violated.has_value(); }
  Rational key(int edge) const;
  const PairSurplus& pair(int edge, int from) const;
  /// max over edges of |s_ij - s_ji|.
  Rational max_imbalance() const;
};

SurplusState surpluses(const Graph& g, const std::vector<Rational>& x);

struct ShiftResult {
  std::vector<Rational> x;
  int from = 0;  // gains mu
  int to = 0;    // loses mu
  Rational mu;
};

/// One local shift on the top violated pair. Checks four shift properties
/// (new pair surpluses, s non-increasing with |I| shrinking on ties, frozen
/// pairs unchanged, stability and total preserved) and throws
/// InvariantViolation if any fails. PreconditionError if nothing is violated.
ShiftResult maschler_shift(const Graph& g, const std::vector<Rational>& x, const SurplusState& st);

/// max delta over y >= 0 with y(V) = 1^T x, frozen defining terms for S(x)
/// pairs, dominance of those terms, the surplus cap Delta(x) - delta for every
/// other pair, and y(e) >= 1. Asserts that (x, Delta(x) - s(x)) is feasible;
/// without a violated pair S(x) is empty and s(x) is the largest surplus.
struct DeltaLp {
  lp::Problem problem;
  std::vector<int> y_var;
  int delta_var = -1;
};

DeltaLp build_delta_lp(const Graph& g, const std::vector<Rational>& x, const SurplusState& st);

struct PrekernelStats {
  std::size_t lp_solves = 0;
  std::size_t shifts = 0;
  std::size_t rounds = 0;
  std::size_t edges = 0;
  Rational final_imbalance;
  std::vector<std::string> trace;        // one line per round
  std::vector<std::string> diagnostics;  // e.g. negative entries seen mid-run
};

struct PrekernelResult {
  std::vector<Rational> x;
  PrekernelStats stats;
};

/// LP-accelerated local shifts from a stable x0 to a point with
/// s_ij = s_ji on every edge. Caps of |E'| LP solves and |E'|^2 shifts are
/// asserted.
PrekernelResult prekernel(const Graph& g, const std::vector<Rational>& x0);

struct BalancedOutcome {
  Graph reduced;                 // G' = G minus the blocking set
  std::vector<int> matching;     // edges of `reduced`
  std::vector<Rational> x;       // per vertex
  std::vector<Rational> alternative;  // per vertex
  long nu = 0;                   // nu(G)
  std::vector<bool> stable_edge;      // per edge of `reduced`: x_i + x_j >= 1
  std::vector<bool> balanced_edge;    // per matching edge: x_i - a_i == x_j - a_j
  PrekernelStats stats;

  bool ok() const;
};

/// Balanced outcome on G minus the blocking set of `res`. The allocation
/// is first topped up to the budget `res.nu` (nu(G) for a root instance) on
/// the first vertex.
BalancedOutcome balanced_outcome(const Graph& g, const BlockingSetResult& res);

/// Same, from an explicit reduced graph and stable allocation.
BalancedOutcome balanced_outcome(const Graph& reduced, std::vector<Rational> x, long nu);

}  // namespace nbstab

#endif  // NBSTAB_BARGAIN_HPP
