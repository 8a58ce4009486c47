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

#include "nbstab/matching.hpp"

#include <algorithm>
#include <deque>

#include "nbstab/errors.hpp"
#include "nbstab/lp.hpp"

namespace nbstab {

namespace {

// Edmonds' algorithm with explicit blossom bases, BFS from each exposed root.
class Blossom {
 public:
  explicit Blossom(const Graph& g)
      : g_(g), n_(static_cast<int>(g.num_vertices())), match_(n_, -1), parent_(n_), base_(n_),
        used_(n_), in_blossom_(n_) {}

  std::vector<int> run() {
    for (int root = 0; root < n_; ++root) {
      if (match_[root] != -1) continue;
      int v = find_path(root);
      while (v != -1) {
        int pv = parent_[v], ppv = match_[pv];
        match_[v] = pv;
        match_[pv] = v;
        v = ppv;
      }
    }
    return match_;
  }

 private:
  int lca(int a, int b) {
    std::vector<bool> seen(n_, false);
    while (true) {
      a = base_[a];
      seen[a] = true;
      if (match_[a] == -1) break;
      a = parent_[match_[a]];
    }
    while (true) {
      b = base_[b];
      if (seen[b]) return b;
      b = parent_[match_[b]];
    }
  }

  void mark_path(int v, int b, int child) {
    while (base_[v] != b) {
      in_blossom_[base_[v]] = in_blossom_[base_[match_[v]]] = true;
      parent_[v] = child;
      child = match_[v];
      v = parent_[match_[v]];
    }
  }

  int find_path(int root) {
    std::fill(used_.begin(), used_.end(), false);
    std::fill(parent_.begin(), parent_.end(), -1);
    for (int i = 0; i < n_; ++i) base_[i] = i;
    used_[root] = true;
    std::deque<int> q{root};
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int e : g_.incident(v)) {
        int to = g_.other(e, v);
        if (base_[v] == base_[to] || match_[v] == to) continue;
        if (to == root || (match_[to] != -1 && parent_[match_[to]] != -1)) {
          int cur = lca(v, to);
          std::fill(in_blossom_.begin(), in_blossom_.end(), false);
          mark_path(v, cur, to);
          mark_path(to, cur, v);
          for (int i = 0; i < n_; ++i) {
            if (in_blossom_[base_[i]]) {
              base_[i] = cur;
              if (!used_[i]) {
                used_[i] = true;
                q.push_back(i);
              }
            }
          }
        } else if (parent_[to] == -1) {
          parent_[to] = v;
          if (match_[to] == -1) return to;
          used_[match_[to]] = true;
          q.push_back(match_[to]);
        }
      }
    }
    return -1;
  }

  const Graph& g_;
  int n_;
  std::vector<int> match_, parent_, base_;
  std::vector<bool> used_, in_blossom_;
};

}  // namespace

Matching max_matching(const Graph& g) {
  std::vector<int> mate = Blossom(g).run();
  Matching m;
  for (std::size_t v = 0; v < mate.size(); ++v) {
    int w = mate[v];
    if (w == -1) {
      m.exposed.push_back(static_cast<int>(v));
    } else if (static_cast<int>(v) < w) {
      m.edges.push_back(*g.edge_index(static_cast<int>(v), w));
    }
  }
  std::sort(m.edges.begin(), m.edges.end());
  return m;
}

std::vector<int> inessential_vertices(const Graph& g) {
  const std::size_t nu = max_matching(g).size();
  std::vector<int> out;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    std::vector<bool> keep(g.num_vertices(), true);
    keep[v] = false;
    if (max_matching(g.induced(keep)).size() == nu) out.push_back(static_cast<int>(v));
  }
  return out;
}

Rational fractional_matching_value(const Graph& g) {
  lp::Problem p(lp::Sense::kMaximize);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    auto [a, b] = g.edge_key(static_cast<int>(e));
    p.add_variable("y_" + a + "_" + b, 1);
  }
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    std::vector<lp::Term> t;
    for (int e : g.incident(static_cast<int>(v))) t.push_back({e, 1});
    if (!t.empty()) p.add_constraint(std::move(t), lp::Relation::kLessEqual, 1, g.name(static_cast<int>(v)));
  }
  lp::Solution s = lp::solve(p);
  NBSTAB_ENSURE(s.status == lp::Status::kOptimal, "fractional matching LP must be optimal");
  return s.objective;
}

namespace {

// min 1^T x s.t. x_u + x_v >= 1, x(V) = nu, x >= 0.
lp::Solution solve_core_system(const Graph& g, long nu) {
  lp::Problem p;
  for (const auto& v : g.vertices()) p.add_variable("x_" + v, 1);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(static_cast<int>(e));
    p.add_constraint({{ed.u, 1}, {ed.v, 1}}, lp::Relation::kGreaterEqual, 1);
  }
  std::vector<lp::Term> all;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) all.push_back({static_cast<int>(v), 1});
  p.add_constraint(std::move(all), lp::Relation::kEqual, nu, "total");
  return lp::solve(p);
}

}  // namespace

CoreReport core_status(const Graph& g) {
  CoreReport r;
  r.nu = static_cast<long>(max_matching(g).size());
  r.fractional_value = fractional_matching_value(g);
  r.inessential = inessential_vertices(g);

  std::vector<bool> is_iness(g.num_vertices(), false);
  for (int v : r.inessential) is_iness[static_cast<std::size_t>(v)] = true;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(static_cast<int>(e));
    if (is_iness[static_cast<std::size_t>(ed.u)] && is_iness[static_cast<std::size_t>(ed.v)]) {
      r.offending_edge = static_cast<int>(e);
      break;
    }
  }
  lp::Solution core = solve_core_system(g, r.nu);

  const bool lp_says = r.fractional_value == r.nu;
  const bool kt_says = !r.offending_edge.has_value();
  const bool core_says = core.status == lp::Status::kOptimal;
  NBSTAB_ENSURE(r.fractional_value >= r.nu, "fractional matching below integral matching");
  NBSTAB_ENSURE(lp_says == kt_says && kt_says == core_says,
                "core criteria disagree (LP gap, adjacent inessentials, core system)");
  r.status = lp_says ? CoreStatus::kNonempty : CoreStatus::kEmpty;
  if (core_says) r.stable = core.primal;
  return r;
}

std::vector<Rational> stable_allocation(const Graph& g) {
  const long nu = static_cast<long>(max_matching(g).size());
  lp::Solution s = solve_core_system(g, nu);
  if (s.status != lp::Status::kOptimal) {
    throw PreconditionError("stable_allocation: the core of this graph is empty");
  }
  return s.primal;
}

}  // namespace nbstab
