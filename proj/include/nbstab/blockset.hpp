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

#ifndef NBSTAB_BLOCKSET_HPP
#define NBSTAB_BLOCKSET_HPP

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nbstab/graph.hpp"
#include "nbstab/rational.hpp"

namespace nbstab {

/// Generalized blocking-set state: only E1 edges may be blocked, and the
/// allocation budget is `nu`.
struct GbsInstance {
  Graph graph;
  std::vector<bool> e2;  // per edge of `graph`
  long nu = 0;

  std::size_t num_e2() const;
  std::size_t num_e1() const { return graph.num_edges() - num_e2(); }
};

/// E1 = E, E2 = {}, nu = nu(G).
GbsInstance root_instance(const Graph& g);

// ---------------------------------------------------------------------------
// Extreme points of the GBS relaxation
//
//   min 1^T z  s.t.  x_u + x_v + z_uv >= 1  (uv in E1)
//                    x_u + x_v        >= 1  (uv in E2)
//                    1^T x            <= nu,   x, z >= 0

struct UnitVertex {
  int vertex;
};
struct ZeroEdge {
  int edge;
};
struct HeavyEdge {
  int edge;
};
using GoodCertificate = std::variant<UnitVertex, ZeroEdge, HeavyEdge>;

/// Structure of an extreme point with no rounding certificate. `alpha` is
/// the x-value on Y and exceeds 2/3; X carries 1 - alpha and O carries 0.
struct BadPartition {
  std::vector<int> x_side;
  std::vector<int> y_side;
  std::vector<int> o_side;
  Rational alpha;
};

using Classification = std::variant<GoodCertificate, BadPartition>;

/// An optimal basic solution as returned by the simplex, before
/// classification. Edge-indexed vectors cover all edges; z is 0 on E2.
struct BasicSolution {
  std::vector<Rational> x;
  std::vector<Rational> z;
  Rational lp_value;
  std::vector<int> tight_e1;  // E1 rows in the basis-defining system
  std::vector<int> tight_e2;  // E2 rows in the basis-defining system
  bool budget_tight = false;  // budget row in the basis-defining system
  Rational gamma;             // dual multiplier of the budget row, >= 0
  bool fractional = false;
};

struct ExtremePoint : BasicSolution {
  std::optional<Rational> alpha;  // the larger of the two fractional values
  Classification classification;
};

/// Optimal value of the relaxation; works on any graph.
Rational gbs_lp_value(const GbsInstance& inst);

/// Solves the relaxation on a bipartite instance and classifies the optimal
/// basic solution. Fractional points are checked for the {0, a, 1-a, 1}
/// value structure; bad points are checked against every structural
/// property before returning. Violations throw InvariantViolation.
ExtremePoint solve_gbs_lp(const GbsInstance& inst);

/// Value structure of a fractional budget-tight point: the a in (0,1) with
/// every x and E1 z value in {0, a, 1-a, 1}, normalized to a >= 1/2.
/// Throws InvariantViolation if no such a exists.
Rational fractional_alpha(const BasicSolution& sol, const GbsInstance& inst);

/// Good certificate with priority unit vertex > zero edge > heavy edge, each
/// the first in canonical order; otherwise a validated BadPartition.
Classification classify(const BasicSolution& sol, const GbsInstance& inst);

/// Throws InvariantViolation unless `bad` has the proven bad-point structure
/// for `sol` (E1 values, independence of O and X, tight-edge tree, the
/// budget window (|X|+|Y|)/2 < nu < |Y|).
void validate_bad_partition(const BadPartition& bad, const BasicSolution& sol,
                            const GbsInstance& inst);

// ---------------------------------------------------------------------------
// Iterative rounding

struct TraceStep {
  int step = 0;
  std::string kind;  // "1", "2", "3", "bad", "leaf"
  std::size_t vertices = 0;
  std::size_t e1 = 0;
  std::size_t e2 = 0;
  long nu = 0;

  std::string to_string() const;
};

/// Counts of the checks that ran; every failed check throws instead.
struct IrAudit {
  std::size_t steps = 0;
  std::size_t lp_solves = 0;
  std::size_t fractional_points = 0;
  std::size_t bad_points = 0;
  std::size_t invariant_checks = 0;

  IrAudit& operator+=(const IrAudit& o);
};

struct IrResult {
  std::vector<Rational> x;     // per vertex of the input instance
  std::vector<bool> blocked;   // per edge of the input instance
  Rational lp_value;           // relaxation optimum of the input instance
  std::vector<TraceStep> trace;
  IrAudit audit;

  std::size_t num_blocked() const;
};

/// Called with each sub-instance and its classified extreme point, after the
/// built-in checks have passed.
using IrObserver = std::function<void(const GbsInstance&, const ExtremePoint&)>;

/// Iterative rounding on a bipartite instance with sparsity bound `omega`.
/// At every recursion level it asserts
///   x_u + x_v >= 1 off the blocking set, 1^T x <= nu,
///   |B| <= (2 omega + 1) * (that level's LP value).
IrResult ir_solve(const GbsInstance& inst, const Rational& omega, const IrObserver& observe = {});

struct LeafRounding {
  std::vector<Rational> x;
  std::vector<bool> blocked;
};

/// Direct rounding of a bad point: x = 1 on all but |Y| - nu vertices of Y
/// (removed greedily by smallest E2 degree), blocking every edge at the
/// removed vertices. Asserts 1^T x = nu and the size bound.
LeafRounding bad_leaf_round(const GbsInstance& inst, const BadPartition& bad,
                            const Rational& omega, const Rational& lp_value);

namespace detail {
/// Repeatedly removes the Y vertex of least E2 degree in the remaining
/// X u Y subgraph (ties: smallest index), `count` times.
std::vector<int> greedy_y_removal(const GbsInstance& inst, const std::vector<int>& x_side,
                                  const std::vector<int>& y_side, std::size_t count);
}  // namespace detail

// ---------------------------------------------------------------------------
// Top level

struct StabilizeOptions {
  std::optional<Rational> omega;  // sparsity bound to use instead of computing it
  IrObserver observe;             // sees the instances rounded, host side when doubled
};

struct BlockingSetResult {
  std::vector<bool> blocked;  // per edge of the input graph
  std::vector<Rational> x_hat;  // per vertex of the input graph
  Rational root_lp_value;     // relaxation optimum on the input instance
  std::optional<Rational> host_lp_value;  // on the doubled host, if used
  Rational omega;
  Rational guarantee_factor;  // 2w+1 (bipartite) or 8w+2 (doubled)
  bool doubled = false;
  long nu = 0;
  std::vector<TraceStep> trace;
  IrAudit audit;

  std::size_t size() const;
  std::vector<EdgeKey> blocking_set(const Graph& g) const;
  bool bound_holds() const { return Rational(static_cast<long>(size())) <= guarantee_factor * root_lp_value; }
};

/// Approximate minimum blocking set with certified size bound. Bipartite
/// inputs run directly; others run on the bipartite double and are pulled
/// back.
BlockingSetResult stabilize(const Graph& g, const StabilizeOptions& opts = {});
BlockingSetResult stabilize(const GbsInstance& inst, const StabilizeOptions& opts = {});

}  // namespace nbstab

#endif  // NBSTAB_BLOCKSET_HPP
