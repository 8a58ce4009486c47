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

#include "nbstab/blockset.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "nbstab/errors.hpp"
#include "nbstab/lp.hpp"
#include "nbstab/matching.hpp"

namespace nbstab {

std::size_t GbsInstance::num_e2() const {
  return static_cast<std::size_t>(std::count(e2.begin(), e2.end(), true));
}

GbsInstance root_instance(const Graph& g) {
  return GbsInstance{g, std::vector<bool>(g.num_edges(), false),
                     static_cast<long>(max_matching(g).size())};
}

namespace {

using lp::Relation;
using lp::Term;

struct GbsModel {
  lp::Problem problem;
  std::vector<int> x_var;
  std::vector<int> z_var;     // -1 on E2 edges
  std::vector<int> edge_row;  // per edge
  int budget_row = -1;
};

// Variables: x per vertex, then z per E1 edge. Rows: E1 edges, E2 edges,
// then the budget.
GbsModel build_model(const GbsInstance& inst) {
  const Graph& g = inst.graph;
  NBSTAB_ENSURE(inst.e2.size() == g.num_edges(), "edge partition size mismatch");
  NBSTAB_ENSURE(inst.nu >= 0, "negative budget");
  GbsModel m{lp::Problem(lp::Sense::kMinimize), {}, {}, {}, -1};
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    m.x_var.push_back(m.problem.add_variable("x_" + g.vertices()[v]));
  }
  m.z_var.assign(g.num_edges(), -1);
  m.edge_row.assign(g.num_edges(), -1);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (inst.e2[e]) continue;
    auto [a, b] = g.edge_key(static_cast<int>(e));
    m.z_var[e] = m.problem.add_variable("z_" + a + "_" + b, 1);
  }
  auto add_edge_row = [&](std::size_t e) {
    const Edge& ed = g.edge(static_cast<int>(e));
    std::vector<Term> t{{m.x_var[static_cast<std::size_t>(ed.u)], 1},
                        {m.x_var[static_cast<std::size_t>(ed.v)], 1}};
    if (m.z_var[e] >= 0) t.push_back({m.z_var[e], 1});
    auto [a, b] = g.edge_key(static_cast<int>(e));
    m.edge_row[e] = m.problem.add_constraint(std::move(t), Relation::kGreaterEqual, 1,
                                             (inst.e2[e] ? "e2_" : "e1_") + a + "_" + b);
  };
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (!inst.e2[e]) add_edge_row(e);
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (inst.e2[e]) add_edge_row(e);
  }
  std::vector<Term> budget;
  for (int v : m.x_var) budget.push_back({v, 1});
  m.budget_row = m.problem.add_constraint(std::move(budget), Relation::kLessEqual,
                                          Rational(inst.nu), "budget");
  return m;
}

lp::Solution solve_checked(const lp::Problem& p) {
  lp::Solution s = lp::solve(p);
  if (s.status != lp::Status::kOptimal) {
    throw InvariantViolation("blocking-set relaxation is " + lp::to_string(s.status));
  }
  auto issues = lp::check_certificates(p, s);
  if (!issues.empty()) throw InvariantViolation("LP certificate check failed: " + issues.front());
  return s;
}

bool is_zero_one(const Rational& q) { return q == 0 || q == 1; }

}  // namespace

Rational gbs_lp_value(const GbsInstance& inst) {
  GbsModel m = build_model(inst);
  return solve_checked(m.problem).objective;
}

Rational fractional_alpha(const BasicSolution& sol, const GbsInstance& inst) {
  std::optional<Rational> a;
  auto visit = [&](const Rational& q) {
    if (is_zero_one(q)) return;
    if (!a) {
      a = q;
      return;
    }
    if (q != *a && q != 1 - *a) {
      throw InvariantViolation("fractional point mixes values " + to_string(*a) + " and " +
                               to_string(q));
    }
  };
  for (const Rational& q : sol.x) visit(q);
  for (std::size_t e = 0; e < inst.graph.num_edges(); ++e) {
    if (!inst.e2[e]) visit(sol.z[e]);
  }
  NBSTAB_ENSURE(a.has_value(), "point is integral");
  NBSTAB_ENSURE(*a > 0 && *a < 1, "fractional value outside (0,1)");
  return std::max(*a, Rational(1 - *a));
}

void validate_bad_partition(const BadPartition& bad, const BasicSolution& sol,
                            const GbsInstance& inst) {
  const Graph& g = inst.graph;
  const std::size_t n = g.num_vertices();
  const Rational& alpha = bad.alpha;
  NBSTAB_ENSURE(alpha > ratio(2, 3) && alpha < 1, "bad point alpha must lie in (2/3, 1)");
  NBSTAB_ENSURE(sol.budget_tight, "bad point must have the budget in its defining system");

  // 0 = O, 1 = X, 2 = Y
  std::vector<int> cls(n, -1);
  auto assign = [&](const std::vector<int>& side, int c, const Rational& val) {
    for (int v : side) {
      NBSTAB_ENSURE(v >= 0 && static_cast<std::size_t>(v) < n, "partition vertex out of range");
      NBSTAB_ENSURE(cls[static_cast<std::size_t>(v)] == -1, "partition classes overlap");
      cls[static_cast<std::size_t>(v)] = c;
      NBSTAB_ENSURE(sol.x[static_cast<std::size_t>(v)] == val, "vertex value does not match its class");
    }
  };
  assign(bad.o_side, 0, Rational(0));
  assign(bad.x_side, 1, Rational(1 - alpha));
  assign(bad.y_side, 2, alpha);
  NBSTAB_ENSURE(std::count(cls.begin(), cls.end(), -1) == 0, "partition does not cover V");

  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(static_cast<int>(e));
    int cu = cls[static_cast<std::size_t>(ed.u)], cv = cls[static_cast<std::size_t>(ed.v)];
    NBSTAB_ENSURE((cu == 2) != (cv == 2), "edge must have exactly one endpoint in Y");
    if (!inst.e2[e]) {
      NBSTAB_ENSURE(sol.z[e] == 1 - alpha, "E1 slack differs from 1 - alpha");
    }
  }
  for (int e : sol.tight_e1) {
    const Edge& ed = g.edge(e);
    NBSTAB_ENSURE(cls[static_cast<std::size_t>(ed.u)] + cls[static_cast<std::size_t>(ed.v)] == 2,
                  "tight E1 edge must join O and Y");
  }

  // Tight E2 edges form a spanning tree on X u Y.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  for (int e : sol.tight_e2) {
    const Edge& ed = g.edge(e);
    NBSTAB_ENSURE(cls[static_cast<std::size_t>(ed.u)] + cls[static_cast<std::size_t>(ed.v)] == 3,
                  "tight E2 edge must join X and Y");
    int a = find(ed.u), b = find(ed.v);
    NBSTAB_ENSURE(a != b, "tight E2 edges contain a cycle");
    parent[static_cast<std::size_t>(a)] = b;
  }
  const std::size_t xy = bad.x_side.size() + bad.y_side.size();
  NBSTAB_ENSURE(sol.tight_e2.size() + 1 == xy, "tight E2 edges do not span X u Y");

  const long nx = static_cast<long>(bad.x_side.size());
  const long ny = static_cast<long>(bad.y_side.size());
  NBSTAB_ENSURE(nx + ny < 2 * inst.nu && inst.nu < ny, "budget outside ((|X|+|Y|)/2, |Y|)");
  NBSTAB_ENSURE((1 - alpha) * nx + alpha * ny == inst.nu, "budget row not tight");

  // Dual side: LP value = gamma (|Y| - nu) and every E1 degree is <= gamma.
  NBSTAB_ENSURE(sol.lp_value == sol.gamma * (ny - inst.nu), "LP value differs from gamma(|Y| - nu)");
  for (int u : bad.y_side) {
    long d1 = 0;
    for (int e : g.incident(u)) d1 += inst.e2[static_cast<std::size_t>(e)] ? 0 : 1;
    NBSTAB_ENSURE(Rational(d1) <= sol.gamma, "E1 degree exceeds the budget dual");
  }
}

Classification classify(const BasicSolution& sol, const GbsInstance& inst) {
  const Graph& g = inst.graph;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (sol.x[v] == 1) return GoodCertificate{UnitVertex{static_cast<int>(v)}};
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (!inst.e2[e] && sol.z[e] == 0) return GoodCertificate{ZeroEdge{static_cast<int>(e)}};
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (!inst.e2[e] && sol.z[e] >= ratio(1, 3)) return GoodCertificate{HeavyEdge{static_cast<int>(e)}};
  }
  NBSTAB_ENSURE(inst.num_e1() > 0, "no E1 edge but no certificate");
  NBSTAB_ENSURE(sol.fractional, "integral point without certificate");
  Rational alpha = fractional_alpha(sol, inst);
  BadPartition bad;
  bad.alpha = alpha;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    const int iv = static_cast<int>(v);
    if (sol.x[v] == 0) {
      bad.o_side.push_back(iv);
    } else if (sol.x[v] == alpha) {
      bad.y_side.push_back(iv);
    } else if (sol.x[v] == 1 - alpha) {
      bad.x_side.push_back(iv);
    } else {
      throw InvariantViolation("vertex value " + to_string(sol.x[v]) + " outside {0, a, 1-a}");
    }
  }
  validate_bad_partition(bad, sol, inst);
  return bad;
}

ExtremePoint solve_gbs_lp(const GbsInstance& inst) {
  GbsModel m = build_model(inst);
  lp::Solution s = solve_checked(m.problem);
  const Graph& g = inst.graph;

  ExtremePoint ep;
  ep.lp_value = s.objective;
  for (int v : m.x_var) ep.x.push_back(s.primal[static_cast<std::size_t>(v)]);
  ep.z.assign(g.num_edges(), Rational(0));
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (m.z_var[e] >= 0) ep.z[e] = s.primal[static_cast<std::size_t>(m.z_var[e])];
  }
  std::map<int, int> row_edge;
  for (std::size_t e = 0; e < g.num_edges(); ++e) row_edge[m.edge_row[e]] = static_cast<int>(e);
  for (int r : s.defining_rows) {
    if (r == m.budget_row) {
      ep.budget_tight = true;
      continue;
    }
    int e = row_edge.at(r);
    (inst.e2[static_cast<std::size_t>(e)] ? ep.tight_e2 : ep.tight_e1).push_back(e);
  }
  std::sort(ep.tight_e1.begin(), ep.tight_e1.end());
  std::sort(ep.tight_e2.begin(), ep.tight_e2.end());
  ep.gamma = -s.duals[static_cast<std::size_t>(m.budget_row)];
  ep.fractional = std::any_of(ep.x.begin(), ep.x.end(), [](const Rational& q) { return !is_integer(q); }) ||
                  std::any_of(ep.z.begin(), ep.z.end(), [](const Rational& q) { return !is_integer(q); });
  if (ep.fractional) {
    NBSTAB_ENSURE(ep.budget_tight, "fractional extreme point without tight budget");
    ep.alpha = fractional_alpha(ep, inst);
  }
  ep.classification = classify(ep, inst);
  return ep;
}

// ---------------------------------------------------------------------------

std::string TraceStep::to_string() const {
  std::ostringstream os;
  os << "step=" << step << " case=" << kind << " |V|=" << vertices << " |E1|=" << e1
     << " |E2|=" << e2 << " nu=" << nu;
  return os.str();
}

IrAudit& IrAudit::operator+=(const IrAudit& o) {
  steps += o.steps;
  lp_solves += o.lp_solves;
  fractional_points += o.fractional_points;
  bad_points += o.bad_points;
  invariant_checks += o.invariant_checks;
  return *this;
}

std::size_t IrResult::num_blocked() const {
  return static_cast<std::size_t>(std::count(blocked.begin(), blocked.end(), true));
}

namespace detail {

std::vector<int> greedy_y_removal(const GbsInstance& inst, const std::vector<int>& x_side,
                                  const std::vector<int>& y_side, std::size_t count) {
  const Graph& g = inst.graph;
  NBSTAB_ENSURE(count <= y_side.size(), "cannot remove more vertices than |Y|");
  std::vector<bool> alive(g.num_vertices(), false);
  for (int v : x_side) alive[static_cast<std::size_t>(v)] = true;
  for (int v : y_side) alive[static_cast<std::size_t>(v)] = true;
  std::vector<int> ys = y_side;
  std::sort(ys.begin(), ys.end());
  std::vector<int> removed;
  for (std::size_t k = 0; k < count; ++k) {
    int best = -1;
    long best_deg = 0;
    for (int u : ys) {
      if (!alive[static_cast<std::size_t>(u)]) continue;
      long d = 0;
      for (int e : g.incident(u)) {
        if (inst.e2[static_cast<std::size_t>(e)] && alive[static_cast<std::size_t>(g.other(e, u))]) ++d;
      }
      if (best < 0 || d < best_deg) {
        best = u;
        best_deg = d;
      }
    }
    alive[static_cast<std::size_t>(best)] = false;
    removed.push_back(best);
  }
  return removed;
}

}  // namespace detail

LeafRounding bad_leaf_round(const GbsInstance& inst, const BadPartition& bad,
                            const Rational& omega, const Rational& lp_value) {
  const Graph& g = inst.graph;
  const long ny = static_cast<long>(bad.y_side.size());
  NBSTAB_ENSURE(ny > inst.nu && 2 * inst.nu > ny + static_cast<long>(bad.x_side.size()),
                "bad leaf outside its budget window");
  const std::size_t k = static_cast<std::size_t>(ny - inst.nu);
  std::vector<int> removed = detail::greedy_y_removal(inst, bad.x_side, bad.y_side, k);

  LeafRounding out;
  out.x.assign(g.num_vertices(), Rational(0));
  out.blocked.assign(g.num_edges(), false);
  for (int u : bad.y_side) out.x[static_cast<std::size_t>(u)] = 1;
  long e2_removed = 0;
  for (int u : removed) {
    out.x[static_cast<std::size_t>(u)] = 0;
    for (int e : g.incident(u)) {
      out.blocked[static_cast<std::size_t>(e)] = true;
      if (inst.e2[static_cast<std::size_t>(e)]) ++e2_removed;
    }
  }
  Rational total = std::accumulate(out.x.begin(), out.x.end(), Rational(0));
  NBSTAB_ENSURE(total == inst.nu, "bad leaf allocation must use exactly nu");
  NBSTAB_ENSURE(Rational(e2_removed) <= 2 * omega * Rational(static_cast<long>(k)),
                "removed E2 degree exceeds 2 omega (|Y| - nu)");
  long nb = static_cast<long>(std::count(out.blocked.begin(), out.blocked.end(), true));
  NBSTAB_ENSURE(Rational(nb) <= (2 * omega + 1) * lp_value, "bad leaf exceeds (2 omega + 1) LP");
  return out;
}

// ---------------------------------------------------------------------------

namespace {

GbsInstance rebuild(const GbsInstance& inst, const std::vector<bool>& keep_vertex,
                    const std::vector<bool>& drop_edge, std::optional<int> to_e2, long nu) {
  const Graph& g = inst.graph;
  std::vector<std::string> verts;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (keep_vertex[v]) verts.push_back(g.vertices()[v]);
  }
  std::vector<EdgeKey> edges;
  std::set<EdgeKey> e2;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(static_cast<int>(e));
    if (drop_edge[e] || !keep_vertex[static_cast<std::size_t>(ed.u)] ||
        !keep_vertex[static_cast<std::size_t>(ed.v)]) {
      continue;
    }
    edges.push_back(g.edge_key(static_cast<int>(e)));
    if (inst.e2[e] || (to_e2 && *to_e2 == static_cast<int>(e))) e2.insert(edges.back());
  }
  GbsInstance out{Graph::from_edges(verts, edges), {}, nu};
  out.e2.assign(out.graph.num_edges(), false);
  for (std::size_t e = 0; e < out.graph.num_edges(); ++e) {
    out.e2[e] = e2.count(out.graph.edge_key(static_cast<int>(e))) > 0;
  }
  return out;
}

GbsInstance drop_isolated(const GbsInstance& inst) {
  const Graph& g = inst.graph;
  std::vector<bool> keep(g.num_vertices());
  bool any = false;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    keep[v] = g.degree(static_cast<int>(v)) > 0;
    any = any || !keep[v];
  }
  if (!any) return inst;
  return rebuild(inst, keep, std::vector<bool>(g.num_edges(), false), std::nullopt, inst.nu);
}

enum class Action { kUnitVertex, kZeroEdge, kHeavyEdge };

struct Level {
  GbsInstance inst;
  Rational lp_value;
  Action action;
  EdgeKey edge;      // zero/heavy edge
  std::string vertex;  // unit vertex
};

using NamedAlloc = std::map<std::string, Rational>;

Rational alloc_of(const NamedAlloc& x, const std::string& v) {
  auto it = x.find(v);
  return it == x.end() ? Rational(0) : it->second;
}

// I1-I3 for one level, on names so deeper levels can be compared directly.
void check_level(const GbsInstance& inst, const NamedAlloc& x, const std::set<EdgeKey>& blocked,
                 const Rational& omega, const Rational& lp_value, IrAudit& audit) {
  const Graph& g = inst.graph;
  Rational total = 0;
  for (const std::string& v : g.vertices()) {
    Rational xv = alloc_of(x, v);
    NBSTAB_ENSURE(xv >= 0, "negative allocation");
    total += xv;
  }
  NBSTAB_ENSURE(total <= inst.nu, "allocation exceeds nu");
  std::size_t nb = 0;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    EdgeKey k = g.edge_key(static_cast<int>(e));
    if (blocked.count(k)) {
      ++nb;
      continue;
    }
    NBSTAB_ENSURE(alloc_of(x, k.first) + alloc_of(x, k.second) >= 1,
                  "unblocked edge " + k.first + "-" + k.second + " is not covered");
  }
  NBSTAB_ENSURE(nb == blocked.size(), "blocking set leaves the instance");
  NBSTAB_ENSURE(Rational(static_cast<long>(nb)) <= (2 * omega + 1) * lp_value,
                "blocking set exceeds (2 omega + 1) LP");
  ++audit.invariant_checks;
}

}  // namespace

IrResult ir_solve(const GbsInstance& input, const Rational& omega, const IrObserver& observe) {
  NBSTAB_ENSURE(is_bipartite(input.graph).has_value(), "iterative rounding needs a bipartite instance");
  NBSTAB_ENSURE(omega >= 1, "sparsity bound below 1");
  IrResult res;
  std::vector<Level> levels;
  NamedAlloc x;
  std::set<EdgeKey> blocked;
  std::optional<Rational> root_value;

  GbsInstance cur = input;
  for (int step = 1;; ++step) {
    const std::size_t progress = cur.graph.num_vertices() + cur.num_e1();
    cur = drop_isolated(cur);
    TraceStep ts{step, "", cur.graph.num_vertices(), cur.num_e1(), cur.num_e2(), cur.nu};
    ++res.audit.steps;

    if (cur.num_e1() == 0) {
      // Only coverage rows remain: the minimum vertex cover LP is integral
      // on a bipartite graph and must fit in the budget.
      lp::Problem cover(lp::Sense::kMinimize);
      std::vector<int> var;
      for (const std::string& v : cur.graph.vertices()) var.push_back(cover.add_variable("x_" + v, 1));
      for (const Edge& ed : cur.graph.edges()) {
        cover.add_constraint({{var[static_cast<std::size_t>(ed.u)], 1}, {var[static_cast<std::size_t>(ed.v)], 1}},
                             Relation::kGreaterEqual, 1);
      }
      lp::Solution s = solve_checked(cover);
      ++res.audit.lp_solves;
      NBSTAB_ENSURE(s.objective <= cur.nu, "E2 edges cannot be covered within nu");
      for (std::size_t v = 0; v < var.size(); ++v) {
        const Rational& q = s.primal[static_cast<std::size_t>(var[v])];
        NBSTAB_ENSURE(is_integer(q), "cover LP returned a fractional vertex");
        if (q != 0) x[cur.graph.vertices()[v]] = q;
      }
      ts.kind = "leaf";
      res.trace.push_back(ts);
      if (!root_value) root_value = Rational(0);
      check_level(cur, x, blocked, omega, Rational(0), res.audit);
      break;
    }

    ExtremePoint ep = solve_gbs_lp(cur);
    ++res.audit.lp_solves;
    if (ep.fractional) ++res.audit.fractional_points;
    if (!root_value) root_value = ep.lp_value;
    if (observe) observe(cur, ep);

    if (auto* bad = std::get_if<BadPartition>(&ep.classification)) {
      ++res.audit.bad_points;
      LeafRounding leaf = bad_leaf_round(cur, *bad, omega, ep.lp_value);
      for (std::size_t v = 0; v < leaf.x.size(); ++v) {
        if (leaf.x[v] != 0) x[cur.graph.vertices()[v]] = leaf.x[v];
      }
      for (std::size_t e = 0; e < leaf.blocked.size(); ++e) {
        if (leaf.blocked[e]) blocked.insert(cur.graph.edge_key(static_cast<int>(e)));
      }
      ts.kind = "bad";
      res.trace.push_back(ts);
      check_level(cur, x, blocked, omega, ep.lp_value, res.audit);
      break;
    }

    const Graph& g = cur.graph;
    std::vector<bool> keep(g.num_vertices(), true);
    std::vector<bool> drop(g.num_edges(), false);
    std::optional<int> to_e2;
    long nu = cur.nu;
    Level lvl{cur, ep.lp_value, Action::kUnitVertex, {}, {}};
    const auto& cert = std::get<GoodCertificate>(ep.classification);
    if (auto* u = std::get_if<UnitVertex>(&cert)) {
      lvl.vertex = g.name(u->vertex);
      keep[static_cast<std::size_t>(u->vertex)] = false;
      nu -= 1;
      NBSTAB_ENSURE(nu >= 0, "unit vertex with zero budget");
      ts.kind = "1";
    } else if (auto* z0 = std::get_if<ZeroEdge>(&cert)) {
      lvl.action = Action::kZeroEdge;
      lvl.edge = g.edge_key(z0->edge);
      to_e2 = z0->edge;
      ts.kind = "2";
    } else {
      const auto& h = std::get<HeavyEdge>(cert);
      lvl.action = Action::kHeavyEdge;
      lvl.edge = g.edge_key(h.edge);
      drop[static_cast<std::size_t>(h.edge)] = true;
      ts.kind = "3";
    }
    res.trace.push_back(ts);
    GbsInstance next = rebuild(cur, keep, drop, to_e2, nu);
    NBSTAB_ENSURE(next.graph.num_vertices() + next.num_e1() < progress, "rounding step made no progress");
    levels.push_back(std::move(lvl));
    cur = std::move(next);
  }

  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    if (it->action == Action::kUnitVertex) {
      NBSTAB_ENSURE(!x.count(it->vertex), "unit vertex reappeared below its level");
      x[it->vertex] = 1;
    } else if (it->action == Action::kHeavyEdge) {
      blocked.insert(it->edge);
    }
    check_level(it->inst, x, blocked, omega, it->lp_value, res.audit);
  }
  // The input itself, which may still hold isolated vertices.
  check_level(input, x, blocked, omega, *root_value, res.audit);

  const Graph& g = input.graph;
  res.lp_value = *root_value;
  res.x.assign(g.num_vertices(), Rational(0));
  for (std::size_t v = 0; v < g.num_vertices(); ++v) res.x[v] = alloc_of(x, g.vertices()[v]);
  res.blocked.assign(g.num_edges(), false);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    res.blocked[e] = blocked.count(g.edge_key(static_cast<int>(e))) > 0;
  }
  return res;
}

// ---------------------------------------------------------------------------

std::size_t BlockingSetResult::size() const {
  return static_cast<std::size_t>(std::count(blocked.begin(), blocked.end(), true));
}

std::vector<EdgeKey> BlockingSetResult::blocking_set(const Graph& g) const {
  std::vector<EdgeKey> out;
  for (std::size_t e = 0; e < blocked.size(); ++e) {
    if (blocked[e]) out.push_back(g.edge_key(static_cast<int>(e)));
  }
  return out;
}

BlockingSetResult stabilize(const Graph& g, const StabilizeOptions& opts) {
  return stabilize(root_instance(g), opts);
}

BlockingSetResult stabilize(const GbsInstance& inst, const StabilizeOptions& opts) {
  const Graph& g = inst.graph;
  BlockingSetResult out;
  out.nu = inst.nu;
  out.omega = opts.omega ? *opts.omega : compute_sparsity(g).omega;
  NBSTAB_ENSURE(out.omega >= 1, "sparsity bound below 1");
  out.root_lp_value = gbs_lp_value(inst);

  if (is_bipartite(g)) {
    IrResult ir = ir_solve(inst, out.omega, opts.observe);
    NBSTAB_ENSURE(ir.lp_value == out.root_lp_value, "root LP value changed between solves");
    out.x_hat = std::move(ir.x);
    out.blocked = std::move(ir.blocked);
    out.guarantee_factor = 2 * out.omega + 1;
    out.trace = std::move(ir.trace);
    out.audit = ir.audit;
  } else {
    DoubledGraph d = bipartite_double(g);
    GbsInstance host{d.host, std::vector<bool>(d.host.num_edges(), false), 2 * inst.nu};
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      if (!inst.e2[e]) continue;
      host.e2[static_cast<std::size_t>(d.edge_map[e].first)] = true;
      host.e2[static_cast<std::size_t>(d.edge_map[e].second)] = true;
    }
    IrResult ir = ir_solve(host, 2 * out.omega, opts.observe);
    NBSTAB_ENSURE(ir.lp_value <= 2 * out.root_lp_value, "host LP exceeds twice the root LP");
    PulledBack pb = pull_back(d, ir.x, ir.blocked);
    out.x_hat = std::move(pb.x);
    out.blocked = std::move(pb.blocked);
    out.host_lp_value = ir.lp_value;
    out.guarantee_factor = 8 * out.omega + 2;
    out.doubled = true;
    out.trace = std::move(ir.trace);
    out.audit = ir.audit;
  }

  Rational total = 0;
  for (const Rational& q : out.x_hat) total += q;
  NBSTAB_ENSURE(total <= inst.nu, "pulled-back allocation exceeds nu");
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (out.blocked[e]) continue;
    const Edge& ed = g.edge(static_cast<int>(e));
    NBSTAB_ENSURE(out.x_hat[static_cast<std::size_t>(ed.u)] + out.x_hat[static_cast<std::size_t>(ed.v)] >= 1,
                  "unblocked edge not covered after pullback");
  }
  NBSTAB_ENSURE(out.bound_holds(), "blocking set exceeds the certified bound");
  return out;
}

}  // namespace nbstab
