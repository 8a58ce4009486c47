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

#ifndef NBSTAB_ORACLE_HPP
#define NBSTAB_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nbstab/bargain.hpp"
#include "nbstab/blockset.hpp"
#include "nbstab/graph.hpp"
#include "nbstab/rational.hpp"

// Brute-force ground truth and instance generators. Nothing here shares
// code with the rounding or bargaining paths beyond the graph type and the
// exact LP solver used for witnesses.
namespace nbstab::oracle {

/// Integrality-gap family: X = {x1..xn}, Y = {y1..y2n}, each Y vertex owns
/// four O vertices "o_<y>_<k>"; E2 = X x Y, E1 = the Y-O edges, nu = 2n - 1.
struct GapInstance {
  int n = 0;
  GbsInstance instance;
  std::vector<int> x_side, y_side, o_side;
};

GapInstance gen_gap(int n);

/// Deterministic random graph on n vertices "v00".."v<n-1>" whose sparsity
/// is at most `omega_target`, with at most `max_edges` edges if given.
/// Edges are proposed one at a time and rejected when they would break the
/// target. Throws InputError for n < 1 or omega_target < 1.
Graph gen_sparse(int n, const Rational& omega_target, std::uint64_t seed,
                 std::optional<std::size_t> max_edges = std::nullopt);

struct BlockingSetWitness {
  std::vector<int> edges;     // edge indices, ascending
  std::vector<Rational> x;    // x >= 0, 1^T x <= nu, covers every other edge
};

struct BruteResult {
  std::optional<BlockingSetWitness> best;
  bool size_limit_hit = false;   // no set within max_size
  std::size_t candidates = 0;    // feasibility checks performed
};

struct BruteOptions {
  std::size_t max_size = 20;
  /// Re-decide every candidate with the exact LP and throw
  /// InvariantViolation if the two feasibility tests disagree.
  bool cross_check_lp = false;
};

/// Smallest set B of non-E2 edges (ties: lexicographic in edge order) such
/// that G - B has a fractional vertex cover of weight <= nu.
BruteResult brute_min_blocking_set(const Graph& g, const std::vector<bool>& e2, long nu,
                                   const BruteOptions& opts = {});
BruteResult brute_min_blocking_set(const Graph& g, long nu, const BruteOptions& opts = {});

/// Minimum fractional vertex cover weight, computed combinatorially as half
/// a maximum matching of the bipartite double cover.
Rational fractional_cover_number(const Graph& g, const std::vector<bool>& dropped);

/// Maximum matching size by exhaustive search; |E| <= 22.
long brute_max_matching(const Graph& g);

/// Re-evaluates (S1) total <= nu, (S2) x_i + x_j >= 1 on every edge and
/// (S3) x_i - a_i = x_j - a_j on every matching edge, with alternatives a
/// recomputed here. Also checks that `matching` is a maximum matching when
/// the graph is small enough for exhaustive search. Empty means it passes.
std::vector<std::string> verify_outcome(const Graph& reduced, long nu, const std::vector<int>& matching,
                                        const std::vector<Rational>& x);
std::vector<std::string> verify_outcome(const BalancedOutcome& out);

}  // namespace nbstab::oracle

#endif  // NBSTAB_ORACLE_HPP
