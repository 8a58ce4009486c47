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

#ifndef NBSTAB_MATCHING_HPP
#define NBSTAB_MATCHING_HPP

#include <optional>
#include <vector>

#include "nbstab/graph.hpp"
#include "nbstab/rational.hpp"

namespace nbstab {

struct Matching {
  std::vector<int> edges;    // edge indices, ascending
  std::vector<int> exposed;  // unmatched vertices, ascending
  std::size_t size() const { return edges.size(); }
};

/// Maximum-cardinality matching (Edmonds' blossom algorithm).
Matching max_matching(const Graph& g);

/// Vertices i with nu(G - i) == nu(G), i.e. exposed by some maximum matching.
std::vector<int> inessential_vertices(const Graph& g);

enum class CoreStatus { kEmpty, kNonempty };

struct CoreReport {
  long nu = 0;
  Rational fractional_value;  // optimum of the fractional matching LP
  std::vector<int> inessential;
  CoreStatus status = CoreStatus::kNonempty;
  std::optional<std::vector<Rational>> stable;  // when non-empty
  std::optional<int> offending_edge;            // when empty: joins two inessentials
};

/// Decides core emptiness three ways (LP gap, adjacent inessential vertices,
/// feasibility of the core system) and throws InvariantViolation if they
/// disagree.
CoreReport core_status(const Graph& g);

/// A core point: x >= 0, x(V) = nu(G), x_u + x_v >= 1 on every edge.
/// Throws PreconditionError when the core is empty.
std::vector<Rational> stable_allocation(const Graph& g);

/// Optimum of max 1^T y s.t. y(delta(i)) <= 1, y >= 0.
Rational fractional_matching_value(const Graph& g);

}  // namespace nbstab

#endif  // NBSTAB_MATCHING_HPP
