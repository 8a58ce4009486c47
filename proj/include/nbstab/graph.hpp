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

#ifndef NBSTAB_GRAPH_HPP
#define NBSTAB_GRAPH_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nbstab/rational.hpp"

namespace nbstab {

/// Unordered pair of vertex identifiers, stored with first < second.
using EdgeKey = std::pair<std::string, std::string>;

EdgeKey make_edge_key(std::string a, std::string b);

/// Per-vertex values keyed by identifier.
using Allocation = std::map<std::string, Rational>;

class Graph;
/// Keys index-aligned values by vertex identifier.
Allocation to_allocation(const Graph& g, const std::vector<Rational>& x);

/// Endpoints as vertex indices, u < v.
struct Edge {
  int u = 0;
  int v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph. Vertices are kept sorted by identifier and edges
/// sorted by (u, v) index pair, so every iteration order is canonical.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from identifiers. Vertices mentioned only by edges are
  /// added implicitly; duplicate edges collapse. Throws InputError on a loop.
  static Graph from_edges(const std::vector<std::string>& vertices,
                          const std::vector<EdgeKey>& edges);

  std::size_t num_vertices() const { return names_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const std::vector<std::string>& vertices() const { return names_; }
  const std::string& name(int v) const { return names_[static_cast<std::size_t>(v)]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
  /// Edge indices incident to v, ordered by the other endpoint.
  const std::vector<int>& incident(int v) const {
    return incident_[static_cast<std::size_t>(v)];
  }
  std::size_t degree(int v) const { return incident(v).size(); }

  int other(int e, int v) const {
    const Edge& ed = edge(e);
    return ed.u == v ? ed.v : ed.u;
  }

  std::optional<int> index_of(std::string_view name) const;
  std::optional<int> edge_index(int a, int b) const;
  std::optional<int> edge_index(const EdgeKey& key) const;
  EdgeKey edge_key(int e) const;

  /// Same vertex set, edges flagged in `drop` removed.
  Graph without_edges(const std::vector<bool>& drop) const;
  /// Subgraph induced by the vertices flagged in `keep`.
  Graph induced(const std::vector<bool>& keep) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.names_ == b.names_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> incident_;
  std::map<std::string, int, std::less<>> index_;
};

// ---------------------------------------------------------------------------
// Text formats

/// Result of reading the edge-list format. Beyond plain "u v" lines, an
/// edge line may carry a class tag ("u v e2"), and "#@ nu N" / "#@ vertex ID"
/// directives set a budget and declare isolated vertices. Plain "#" lines are
/// comments.
struct ParsedInput {
  Graph graph;
  std::vector<bool> e2;  // per edge of `graph`; all false when untagged
  bool has_partition = false;
  std::optional<long> nu;
};

ParsedInput parse_input(std::string_view text);
Graph parse_edge_list(std::string_view text);

/// Canonical edge-list text. Isolated vertices are emitted as directives so
/// that parse(serialize(g)) == g.
std::string to_edge_list(const Graph& g);
std::string to_edge_list(const Graph& g, const std::vector<bool>& e2,
                         std::optional<long> nu);

/// {"vertices":[...],"edges":[["u","v"],...]}
std::string to_json(const Graph& g);
Graph graph_from_json(std::string_view text);

/// Undirected DOT; edges in `dashed` are drawn with style=dashed.
std::string to_dot(const Graph& g, const std::set<EdgeKey>& dashed = {});

// ---------------------------------------------------------------------------
// Sparsity

struct Sparsity {
  Rational omega;    // max(1, density)
  Rational density;  // max over non-empty S of |E(G[S])| / |S|
  std::vector<std::string> witness;  // a densest S; empty for the empty graph
};

/// Exact maximum subgraph density. Brute force up to
/// kBruteForceSparsityLimit vertices, parametric max-flow above.
Sparsity compute_sparsity(const Graph& g);

inline constexpr std::size_t kBruteForceSparsityLimit = 20;

namespace detail {
Sparsity sparsity_brute_force(const Graph& g);
Sparsity sparsity_max_flow(const Graph& g);
}  // namespace detail

/// Number of edges of G[S] for a vertex subset given by identifiers.
std::size_t induced_edge_count(const Graph& g, const std::vector<bool>& in_set);

// ---------------------------------------------------------------------------
// Bipartite doubling

/// Bipartite double cover: each u becomes u#1 and u#2, each uv becomes
/// {u#1 v#2, u#2 v#1}.
struct DoubledGraph {
  Graph host;
  std::vector<std::pair<int, int>> side_map;  // original vertex -> (copy1, copy2)
  std::vector<std::pair<int, int>> edge_map;  // original edge -> (u1v2, u2v1)
};

DoubledGraph bipartite_double(const Graph& g);

struct PulledBack {
  std::vector<Rational> x;  // per original vertex
  std::vector<bool> blocked;  // per original edge
};

/// x_u = (x_{u#1} + x_{u#2}) / 2; uv is blocked iff either copy is blocked.
PulledBack pull_back(const DoubledGraph& d, const std::vector<Rational>& x_host,
                     const std::vector<bool>& blocked_host);

/// A 2-colouring (0/1 per vertex) if one exists. BFS from the lowest index of
/// each component, which gets colour 0.
std::optional<std::vector<int>> is_bipartite(const Graph& g);

}  // namespace nbstab

#endif  // NBSTAB_GRAPH_HPP
