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

#include "nbstab/oracle.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <set>

#include "nbstab/errors.hpp"
#include "nbstab/lp.hpp"

namespace nbstab::oracle {

GapInstance gen_gap(int n) {
  if (n < 1) throw InputError("gap instance needs n >= 1");
  std::vector<std::string> verts;
  std::vector<EdgeKey> edges;
  std::set<EdgeKey> e2;
  std::vector<std::string> xs, ys;
  for (int i = 1; i <= n; ++i) xs.push_back("x" + std::to_string(i));
  for (int j = 1; j <= 2 * n; ++j) ys.push_back("y" + std::to_string(j));
  verts = xs;
  verts.insert(verts.end(), ys.begin(), ys.end());
  for (const auto& x : xs) {
    for (const auto& y : ys) e2.insert(edges.emplace_back(make_edge_key(x, y)));
  }
  std::vector<std::string> os;
  for (const auto& y : ys) {
    for (int k = 1; k <= 4; ++k) {
      os.push_back("o_" + y + "_" + std::to_string(k));
      verts.push_back(os.back());
      edges.push_back(make_edge_key(y, os.back()));
    }
  }
  GapInstance out;
  out.n = n;
  out.instance.graph = Graph::from_edges(verts, edges);
  out.instance.nu = 2L * n - 1;
  const Graph& g = out.instance.graph;
  out.instance.e2.assign(g.num_edges(), false);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    out.instance.e2[e] = e2.count(g.edge_key(static_cast<int>(e))) > 0;
  }
  auto index_all = [&](const std::vector<std::string>& names, std::vector<int>& side) {
    for (const auto& s : names) side.push_back(*g.index_of(s));
    std::sort(side.begin(), side.end());
  };
  index_all(xs, out.x_side);
  index_all(ys, out.y_side);
  index_all(os, out.o_side);
  return out;
}

namespace {

// splitmix64; fixed so generated corpora do not depend on the standard
// library's distributions.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // Uniform in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r;
    do {
      r = next();
    } while (r >= limit);
    return r % bound;
  }

 private:
  std::uint64_t state_;
};

std::string sparse_name(int i, int n) {
  const int width = n > 100 ? 3 : 2;
  char buf[16];
  std::snprintf(buf, sizeof buf, "v%0*d", width, i);
  return buf;
}

}  // namespace

Graph gen_sparse(int n, const Rational& omega_target, std::uint64_t seed,
                 std::optional<std::size_t> max_edges) {
  if (n < 1) throw InputError("gen sparse needs n >= 1");
  if (omega_target < 1) throw InputError("sparsity target below 1 is unsatisfiable");
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(sparse_name(i, n));
  std::vector<EdgeKey> edges;
  std::set<EdgeKey> present;
  const std::size_t pairs = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
  const std::size_t cap = std::min(pairs, max_edges.value_or(pairs));
  SplitMix rng(seed);
  // Bounded number of proposals; the empty graph always meets the target,
  // so the loop only ever stops early, never fails.
  const std::size_t attempts = 4 * pairs + 16;
  for (std::size_t t = 0; t < attempts && edges.size() < cap; ++t) {
    if (n < 2) break;
    int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
    if (b >= a) ++b;
    EdgeKey k = make_edge_key(names[static_cast<std::size_t>(a)], names[static_cast<std::size_t>(b)]);
    if (present.count(k)) continue;
    edges.push_back(k);
    if (compute_sparsity(Graph::from_edges(names, edges)).omega > omega_target) {
      edges.pop_back();
      continue;
    }
    present.insert(k);
  }
  return Graph::from_edges(names, edges);
}

Rational fractional_cover_number(const Graph& g, const std::vector<bool>& dropped) {
  // Kuhn's augmenting paths on the double cover: left copy u -> right copy v
  // for every kept edge uv, in both directions.
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<int>> adj(n);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (!dropped.empty() && dropped[e]) continue;
    const Edge& ed = g.edge(static_cast<int>(e));
    adj[static_cast<std::size_t>(ed.u)].push_back(ed.v);
    adj[static_cast<std::size_t>(ed.v)].push_back(ed.u);
  }
  std::vector<int> match_right(n, -1);
  std::vector<char> seen;
  std::function<bool(int)> augment = [&](int u) {
    for (int v : adj[static_cast<std::size_t>(u)]) {
      if (seen[static_cast<std::size_t>(v)]) continue;
      seen[static_cast<std::size_t>(v)] = 1;
      if (match_right[static_cast<std::size_t>(v)] < 0 || augment(match_right[static_cast<std::size_t>(v)])) {
        match_right[static_cast<std::size_t>(v)] = u;
        return true;
      }
    }
    return false;
  };
  long size = 0;
  for (std::size_t u = 0; u < n; ++u) {
    seen.assign(n, 0);
    if (augment(static_cast<int>(u))) ++size;
  }
  return ratio(size, 2);
}

namespace {

// Exact LP: min 1^T x subject to x_u + x_v >= 1 on every kept edge.
lp::Solution cover_lp(const Graph& g, const std::vector<bool>& dropped) {
  lp::Problem p(lp::Sense::kMinimize);
  std::vector<int> var;
  for (const std::string& v : g.vertices()) var.push_back(p.add_variable("x_" + v, 1));
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (dropped[e]) continue;
    const Edge& ed = g.edge(static_cast<int>(e));
    p.add_constraint({{var[static_cast<std::size_t>(ed.u)], 1}, {var[static_cast<std::size_t>(ed.v)], 1}},
                     lp::Relation::kGreaterEqual, 1);
  }
  lp::Solution s = lp::solve(p);
  NBSTAB_ENSURE(s.status == lp::Status::kOptimal, "cover LP must be optimal");
  return s;
}

}  // namespace

BruteResult brute_min_blocking_set(const Graph& g, const std::vector<bool>& e2, long nu,
                                   const BruteOptions& opts) {
  if (e2.size() != g.num_edges()) throw PreconditionError("edge partition size mismatch");
  std::vector<int> cand;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (!e2[e]) cand.push_back(static_cast<int>(e));
  }
  if (cand.size() > 24) throw PreconditionError("too many blockable edges for enumeration");

  BruteResult res;
  const Rational budget(nu);
  std::vector<bool> dropped(g.num_edges(), false);
  const std::size_t limit = std::min(opts.max_size, cand.size());
  for (std::size_t k = 0; k <= limit; ++k) {
    // Combinations of k positions in lexicographic order.
    std::vector<std::size_t> pos(k);
    for (std::size_t i = 0; i < k; ++i) pos[i] = i;
    while (true) {
      std::fill(dropped.begin(), dropped.end(), false);
      for (std::size_t p : pos) dropped[static_cast<std::size_t>(cand[p])] = true;
      ++res.candidates;
      const bool feasible = fractional_cover_number(g, dropped) <= budget;
      if (opts.cross_check_lp) {
        const bool lp_feasible = cover_lp(g, dropped).objective <= budget;
        NBSTAB_ENSURE(lp_feasible == feasible, "combinatorial and LP feasibility disagree");
      }
      if (feasible) {
        lp::Solution s = cover_lp(g, dropped);
        NBSTAB_ENSURE(s.objective <= budget, "witness LP exceeds nu");
        BlockingSetWitness w;
        for (std::size_t p : pos) w.edges.push_back(cand[p]);
        w.x.assign(s.primal.begin(), s.primal.begin() + static_cast<long>(g.num_vertices()));
        res.best = std::move(w);
        return res;
      }
      // Advance to the next combination.
      std::size_t i = k;
      while (i > 0 && pos[i - 1] == cand.size() - k + (i - 1)) --i;
      if (i == 0) break;
      ++pos[i - 1];
      for (std::size_t j = i; j < k; ++j) pos[j] = pos[j - 1] + 1;
    }
  }
  res.size_limit_hit = true;
  return res;
}

BruteResult brute_min_blocking_set(const Graph& g, long nu, const BruteOptions& opts) {
  return brute_min_blocking_set(g, std::vector<bool>(g.num_edges(), false), nu, opts);
}

long brute_max_matching(const Graph& g) {
  if (g.num_edges() > 22) throw PreconditionError("too many edges for exhaustive matching");
  std::vector<bool> used(g.num_vertices(), false);
  long best = 0;
  std::function<void(std::size_t, long)> rec = [&](std::size_t e, long size) {
    if (e == g.num_edges()) {
      best = std::max(best, size);
      return;
    }
    if (size + static_cast<long>(g.num_edges() - e) <= best) return;
    const Edge& ed = g.edge(static_cast<int>(e));
    if (!used[static_cast<std::size_t>(ed.u)] && !used[static_cast<std::size_t>(ed.v)]) {
      used[static_cast<std::size_t>(ed.u)] = used[static_cast<std::size_t>(ed.v)] = true;
      rec(e + 1, size + 1);
      used[static_cast<std::size_t>(ed.u)] = used[static_cast<std::size_t>(ed.v)] = false;
    }
    rec(e + 1, size);
  };
  rec(0, 0);
  return best;
}

}  // namespace nbstab::oracle

namespace nbstab::oracle {

std::vector<std::string> verify_outcome(const Graph& reduced, long nu, const std::vector<int>& matching,
                                        const std::vector<Rational>& x) {
  std::vector<std::string> issues;
  if (x.size() != reduced.num_vertices()) return {"allocation size mismatch"};
  Rational total = 0;
  for (const Rational& q : x) total += q;
  if (total > nu) issues.push_back("S1: total " + to_string(total) + " exceeds " + std::to_string(nu));
  for (std::size_t v = 0; v < x.size(); ++v) {
    if (x[v] < 0) issues.push_back("negative allocation at " + reduced.vertices()[v]);
  }
  for (std::size_t e = 0; e < reduced.num_edges(); ++e) {
    const Edge& ed = reduced.edge(static_cast<int>(e));
    if (x[static_cast<std::size_t>(ed.u)] + x[static_cast<std::size_t>(ed.v)] < 1) {
      auto [a, b] = reduced.edge_key(static_cast<int>(e));
      issues.push_back("S2: edge " + a + "-" + b + " is unstable");
    }
  }
  std::vector<int> mate(reduced.num_vertices(), -1);
  for (int e : matching) {
    if (e < 0 || static_cast<std::size_t>(e) >= reduced.num_edges()) return {"matching edge out of range"};
    const Edge& ed = reduced.edge(e);
    if (mate[static_cast<std::size_t>(ed.u)] >= 0 || mate[static_cast<std::size_t>(ed.v)] >= 0) {
      issues.push_back("matching edges share a vertex");
      return issues;
    }
    mate[static_cast<std::size_t>(ed.u)] = ed.v;
    mate[static_cast<std::size_t>(ed.v)] = ed.u;
  }
  if (reduced.num_edges() <= 22 && static_cast<long>(matching.size()) != brute_max_matching(reduced)) {
    issues.push_back("matching is not maximum");
  }
  auto alternative = [&](int i) {
    Rational best = 0;
    bool any = false;
    for (const Edge& ed : reduced.edges()) {
      int j = ed.u == i ? ed.v : ed.v == i ? ed.u : -1;
      if (j < 0 || mate[static_cast<std::size_t>(i)] == j) continue;
      Rational v = 1 - x[static_cast<std::size_t>(j)];
      if (!any || v > best) best = v;
      any = true;
    }
    return best;
  };
  for (int e : matching) {
    const Edge& ed = reduced.edge(e);
    if (x[static_cast<std::size_t>(ed.u)] - alternative(ed.u) != x[static_cast<std::size_t>(ed.v)] - alternative(ed.v)) {
      auto [a, b] = reduced.edge_key(e);
      issues.push_back("S3: matching edge " + a + "-" + b + " is unbalanced");
    }
  }
  return issues;
}

std::vector<std::string> verify_outcome(const BalancedOutcome& out) {
  return verify_outcome(out.reduced, out.nu, out.matching, out.x);
}

}  // namespace nbstab::oracle
