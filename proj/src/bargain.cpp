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

#include "nbstab/bargain.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "nbstab/errors.hpp"
#include "nbstab/matching.hpp"

namespace nbstab {

Rational SurplusState::key(int edge) const {
  const auto e = static_cast<std::size_t>(edge);
  return std::max(pairs[2 * e].value, pairs[2 * e + 1].value);
}

const PairSurplus& SurplusState::pair(int edge, int from) const {
  const auto e = static_cast<std::size_t>(edge);
  return pairs[2 * e].from == from ? pairs[2 * e] : pairs[2 * e + 1];
}

Rational SurplusState::max_imbalance() const {
  Rational worst = 0;
  for (std::size_t e = 0; 2 * e < pairs.size(); ++e) {
    Rational d = abs(pairs[2 * e].value - pairs[2 * e + 1].value);
    if (d > worst) worst = d;
  }
  return worst;
}

namespace {

PairSurplus surplus_of(const Graph& g, const std::vector<Rational>& x, int i, int j, int edge) {
  PairSurplus p{i, j, edge, -x[static_cast<std::size_t>(i)], std::nullopt};
  // incident() is ordered by the other endpoint, so strict improvement keeps
  // the smallest maximizing neighbour.
  for (int f : g.incident(i)) {
    if (f == edge) continue;
    int k = g.other(f, i);
    Rational v = 1 - x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(k)];
    if (!p.via || v > p.value) {
      p.value = v;
      p.via = k;
    }
  }
  return p;
}

Rational total_of(const std::vector<Rational>& x) {
  return std::accumulate(x.begin(), x.end(), Rational(0));
}

bool stable_on(const Graph& g, const std::vector<Rational>& x) {
  for (const Edge& ed : g.edges()) {
    if (x[static_cast<std::size_t>(ed.u)] + x[static_cast<std::size_t>(ed.v)] < 1) return false;
  }
  return true;
}

Rational term_value(const std::vector<Rational>& x, const PairSurplus& p) {
  Rational s = 0;
  for (int v : p.term()) s += x[static_cast<std::size_t>(v)];
  return s;
}

}  // namespace

SurplusState surpluses(const Graph& g, const std::vector<Rational>& x) {
  NBSTAB_ENSURE(x.size() == g.num_vertices(), "allocation size mismatch");
  SurplusState st;
  const int m = static_cast<int>(g.num_edges());
  for (int e = 0; e < m; ++e) {
    const Edge& ed = g.edge(e);
    st.pairs.push_back(surplus_of(g, x, ed.u, ed.v, e));
    st.pairs.push_back(surplus_of(g, x, ed.v, ed.u, e));
  }
  std::vector<Rational> keys;
  for (int e = 0; e < m; ++e) keys.push_back(st.key(e));
  st.order.resize(static_cast<std::size_t>(m));
  std::iota(st.order.begin(), st.order.end(), 0);
  std::stable_sort(st.order.begin(), st.order.end(), [&](int a, int b) {
    return keys[static_cast<std::size_t>(a)] > keys[static_cast<std::size_t>(b)];
  });
  for (int e : st.order) {
    const auto ue = static_cast<std::size_t>(e);
    if (st.pairs[2 * ue].value != st.pairs[2 * ue + 1].value) {
      st.top_violated = static_cast<int>(st.pairs[2 * ue].value > st.pairs[2 * ue + 1].value ? 2 * ue : 2 * ue + 1);
      st.s_max = keys[ue];
      break;
    }
  }
  if (!st.violated()) return st;
  std::optional<Rational> cap;
  for (int e : st.order) {
    const Rational& k = keys[static_cast<std::size_t>(e)];
    if (k > st.s_max) {
      st.s_set.push_back(e);
      if (!cap || k < *cap) cap = k;
    } else if (k == st.s_max) {
      st.i_set.push_back(e);
    }
  }
  std::sort(st.s_set.begin(), st.s_set.end());
  std::sort(st.i_set.begin(), st.i_set.end());
  st.delta_cap = cap.value_or(Rational(0));
  return st;
}

ShiftResult maschler_shift(const Graph& g, const std::vector<Rational>& x, const SurplusState& st) {
  if (!st.violated()) throw PreconditionError("local shift needs a violated pair");
  if (!stable_on(g, x)) throw PreconditionError("local shift needs a stable allocation");
  const PairSurplus& hi = st.pairs[static_cast<std::size_t>(*st.top_violated)];
  const PairSurplus& lo = st.pair(hi.edge, hi.to);
  ShiftResult out{x, hi.from, hi.to, (hi.value - lo.value) / 2};
  NBSTAB_ENSURE(out.mu > 0, "shift amount must be positive");
  out.x[static_cast<std::size_t>(hi.from)] += out.mu;
  out.x[static_cast<std::size_t>(hi.to)] -= out.mu;

  SurplusState nx = surpluses(g, out.x);
  const Rational target = st.s_max - out.mu;
  NBSTAB_ENSURE(nx.pair(hi.edge, hi.from).value == target && nx.pair(hi.edge, hi.to).value == target,
                "shifted pair must meet at s(x) - mu");
  if (nx.violated()) {
    NBSTAB_ENSURE(nx.s_max <= st.s_max, "s(x) increased after a shift");
    if (nx.s_max == st.s_max) {
      NBSTAB_ENSURE(nx.i_set.size() < st.i_set.size(), "|I(x)| did not shrink at equal s(x)");
    }
  }
  for (int e : st.s_set) {
    const auto ue = static_cast<std::size_t>(e);
    NBSTAB_ENSURE(nx.pairs[2 * ue].value == st.pairs[2 * ue].value &&
                      nx.pairs[2 * ue + 1].value == st.pairs[2 * ue + 1].value,
                  "frozen pair changed its surplus");
  }
  NBSTAB_ENSURE(total_of(out.x) == total_of(x), "shift changed the total");
  NBSTAB_ENSURE(stable_on(g, out.x), "shift broke stability");
  return out;
}

DeltaLp build_delta_lp(const Graph& g, const std::vector<Rational>& x, const SurplusState& st) {
  using lp::Relation;
  using lp::Term;
  DeltaLp d{lp::Problem(lp::Sense::kMaximize), {}, -1};
  lp::Problem& p = d.problem;
  for (const std::string& v : g.vertices()) d.y_var.push_back(p.add_variable("y_" + v));
  d.delta_var = p.add_variable("delta", 1);
  auto yv = [&](int v) { return d.y_var[static_cast<std::size_t>(v)]; };
  auto edge_terms = [&](int f, const Rational& c) {
    const Edge& ed = g.edge(f);
    return std::vector<Term>{{yv(ed.u), c}, {yv(ed.v), c}};
  };

  std::vector<Term> all;
  for (int v : d.y_var) all.push_back({v, 1});
  p.add_constraint(all, Relation::kEqual, total_of(x), "total");

  std::set<int> in_s(st.s_set.begin(), st.s_set.end());
  for (int e : st.s_set) {
    for (int side = 0; side < 2; ++side) {
      const PairSurplus& ps = st.pairs[2 * static_cast<std::size_t>(e) + static_cast<std::size_t>(side)];
      std::vector<Term> t;
      for (int v : ps.term()) t.push_back({yv(v), 1});
      p.add_constraint(t, Relation::kEqual, term_value(x, ps), "frozen");
      if (!ps.via) continue;
      for (int f : g.incident(ps.from)) {
        if (f == e) continue;
        // y(f) - y(e_ij) >= 0
        std::vector<Term> dom = edge_terms(f, 1);
        for (int v : ps.term()) dom.push_back({yv(v), -1});
        p.add_constraint(dom, Relation::kGreaterEqual, 0, "dominance");
      }
    }
  }
  std::set<int> capped_edges, capped_vertices;
  for (int e = 0; e < static_cast<int>(g.num_edges()); ++e) {
    if (in_s.count(e)) continue;
    const Edge& ed = g.edge(e);
    for (int i : {ed.u, ed.v}) {
      bool other = false;
      for (int f : g.incident(i)) {
        if (f == e) continue;
        other = true;
        capped_edges.insert(f);
      }
      if (!other) capped_vertices.insert(i);
    }
  }
  for (int f : capped_edges) {
    // 1 - y(f) <= Delta - delta
    std::vector<Term> t = edge_terms(f, -1);
    t.push_back({d.delta_var, 1});
    p.add_constraint(t, Relation::kLessEqual, st.delta_cap - 1, "cap");
  }
  for (int i : capped_vertices) {
    // -y_i <= Delta - delta
    p.add_constraint({{yv(i), -1}, {d.delta_var, 1}}, Relation::kLessEqual, st.delta_cap, "cap");
  }
  for (int e = 0; e < static_cast<int>(g.num_edges()); ++e) {
    p.add_constraint(edge_terms(e, 1), Relation::kGreaterEqual, 1, "stable");
  }

  // The current point with delta = Delta(x) - s(x) must be feasible. With
  // nothing violated S(x) is empty and the largest surplus stands in for s(x).
  Rational s_ref = st.s_max;
  if (!st.violated()) {
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      Rational k = st.key(static_cast<int>(e));
      if (e == 0 || k > s_ref) s_ref = k;
    }
  }
  std::vector<Rational> point = x;
  point.push_back(st.delta_cap - s_ref);
  NBSTAB_ENSURE(point.back() >= 0, "current point has negative delta");
  for (std::size_t r = 0; r < p.num_constraints(); ++r) {
    const lp::Constraint& c = p.constraints()[r];
    Rational a = p.row_activity(r, point);
    bool ok = c.rel == Relation::kEqual ? a == c.rhs : c.rel == Relation::kLessEqual ? a <= c.rhs : a >= c.rhs;
    NBSTAB_ENSURE(ok, "current allocation violates delta LP row " + c.name);
  }
  return d;
}

namespace {

bool rows_feasible(const lp::Problem& p, const std::vector<Rational>& point) {
  for (std::size_t r = 0; r < p.num_constraints(); ++r) {
    const lp::Constraint& c = p.constraints()[r];
    Rational a = p.row_activity(r, point);
    bool ok = c.rel == lp::Relation::kEqual ? a == c.rhs
              : c.rel == lp::Relation::kLessEqual ? a <= c.rhs
                                                  : a >= c.rhs;
    if (!ok) return false;
  }
  return true;
}

bool includes(const std::vector<int>& big, const std::vector<int>& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

PrekernelResult prekernel(const Graph& g, const std::vector<Rational>& x0) {
  if (x0.size() != g.num_vertices()) throw PreconditionError("allocation size mismatch");
  for (const Rational& q : x0) {
    if (q < 0) throw PreconditionError("prekernel start must be nonnegative");
  }
  if (!stable_on(g, x0)) throw PreconditionError("prekernel start must be stable");

  PrekernelResult res{x0, {}};
  PrekernelStats& stats = res.stats;
  const std::size_t m = g.num_edges();
  stats.edges = m;
  const Rational total = total_of(x0);
  auto note_negative = [&](const std::vector<Rational>& x) {
    for (std::size_t v = 0; v < x.size(); ++v) {
      if (x[v] < 0) {
        stats.diagnostics.push_back("negative entry " + to_string(x[v]) + " at " + g.vertices()[v] +
                                    " after shift " + std::to_string(stats.shifts));
      }
    }
  };

  std::vector<Rational>& x = res.x;
  while (true) {
    SurplusState st = surpluses(g, x);
    if (!st.violated()) break;
    ++stats.rounds;
    DeltaLp d = build_delta_lp(g, x, st);
    lp::Solution sol = lp::solve(d.problem);
    NBSTAB_ENSURE(sol.status == lp::Status::kOptimal, "delta LP is " + lp::to_string(sol.status));
    auto issues = lp::check_certificates(d.problem, sol);
    if (!issues.empty()) throw InvariantViolation("delta LP certificate check failed: " + issues.front());
    ++stats.lp_solves;
    NBSTAB_ENSURE(stats.lp_solves <= m, "more than |E'| LP solves");

    std::vector<Rational> y(sol.primal.begin(), sol.primal.begin() + static_cast<long>(g.num_vertices()));
    const Rational delta_star = sol.primal[static_cast<std::size_t>(d.delta_var)];
    SurplusState sy = surpluses(g, y);
    std::size_t round_shifts = 0;
    if (sy.violated()) {
      NBSTAB_ENSURE(sy.s_max <= st.s_max, "LP step increased s");
      NBSTAB_ENSURE(includes(sy.s_set, st.s_set), "LP step lost a frozen pair");
      if (sy.s_set == st.s_set) {
        NBSTAB_ENSURE(delta_star == st.delta_cap - sy.s_max, "LP optimum differs from Delta(x) - s(y)");
        const Rational s0 = sy.s_max;
        Rational prev = delta_star;
        while (sy.violated() && sy.s_max == s0) {
          ShiftResult sh = maschler_shift(g, y, sy);
          ++stats.shifts;
          ++round_shifts;
          NBSTAB_ENSURE(round_shifts <= m, "s did not decrease within |E'| shifts");
          NBSTAB_ENSURE(stats.shifts <= m * m, "more than |E'|^2 shifts");
          y = std::move(sh.x);
          note_negative(y);
          sy = surpluses(g, y);
          if (sy.violated() && sy.s_set == st.s_set) {
            Rational di = sy.delta_cap - sy.s_max;
            NBSTAB_ENSURE(di >= prev, "delta decreased along the shift sequence");
            prev = di;
            std::vector<Rational> point = y;
            point.push_back(di);
            NBSTAB_ENSURE(rows_feasible(d.problem, point), "shifted point left the delta LP");
          }
        }
        if (sy.violated()) {
          NBSTAB_ENSURE(includes(sy.s_set, st.s_set) && sy.s_set.size() > st.s_set.size(),
                        "S did not grow after s decreased");
        }
      }
    }
    stats.trace.push_back("round=" + std::to_string(stats.rounds) + " s=" + to_string(st.s_max) +
                          " |S|=" + std::to_string(st.s_set.size()) + " |I|=" +
                          std::to_string(st.i_set.size()) + " shifts=" + std::to_string(round_shifts));
    x = std::move(y);
  }

  stats.final_imbalance = surpluses(g, x).max_imbalance();
  NBSTAB_ENSURE(stats.final_imbalance == 0, "surpluses are not balanced");
  NBSTAB_ENSURE(total_of(x) == total, "prekernel changed the total");
  NBSTAB_ENSURE(stable_on(g, x), "prekernel point is not stable");
  for (const Rational& q : x) NBSTAB_ENSURE(q >= 0, "prekernel point has a negative entry");
  return res;
}

bool BalancedOutcome::ok() const {
  Rational total = total_of(x);
  return total <= nu && std::all_of(stable_edge.begin(), stable_edge.end(), [](bool b) { return b; }) &&
         std::all_of(balanced_edge.begin(), balanced_edge.end(), [](bool b) { return b; });
}

BalancedOutcome balanced_outcome(const Graph& g, const BlockingSetResult& res) {
  Graph reduced = g.without_edges(res.blocked);
  const long nu = res.nu;
  std::vector<Rational> x = res.x_hat;
  Rational total = total_of(x);
  NBSTAB_ENSURE(total <= nu, "allocation exceeds the budget");
  if (total < nu) x[0] += Rational(nu) - total;
  return balanced_outcome(reduced, std::move(x), nu);
}

BalancedOutcome balanced_outcome(const Graph& reduced, std::vector<Rational> x, long nu) {
  BalancedOutcome out;
  out.reduced = reduced;
  out.nu = nu;
  PrekernelResult pk = prekernel(reduced, x);
  out.x = std::move(pk.x);
  out.stats = std::move(pk.stats);
  out.matching = max_matching(reduced).edges;
  std::sort(out.matching.begin(), out.matching.end());
  std::vector<bool> in_m(reduced.num_edges(), false);
  for (int e : out.matching) in_m[static_cast<std::size_t>(e)] = true;

  out.alternative.assign(reduced.num_vertices(), Rational(0));
  for (std::size_t i = 0; i < reduced.num_vertices(); ++i) {
    std::optional<Rational> best;
    for (int f : reduced.incident(static_cast<int>(i))) {
      if (in_m[static_cast<std::size_t>(f)]) continue;
      Rational v = 1 - out.x[static_cast<std::size_t>(reduced.other(f, static_cast<int>(i)))];
      if (!best || v > *best) best = v;
    }
    out.alternative[i] = best.value_or(Rational(0));
  }
  for (const Edge& ed : reduced.edges()) {
    out.stable_edge.push_back(out.x[static_cast<std::size_t>(ed.u)] + out.x[static_cast<std::size_t>(ed.v)] >= 1);
  }
  SurplusState st = surpluses(reduced, out.x);
  for (int e : out.matching) {
    const Edge& ed = reduced.edge(e);
    const auto u = static_cast<std::size_t>(ed.u), v = static_cast<std::size_t>(ed.v);
    const bool balanced = out.x[u] - out.alternative[u] == out.x[v] - out.alternative[v];
    const bool equal_surplus = st.pair(e, ed.u).value == st.pair(e, ed.v).value;
    NBSTAB_ENSURE(balanced == equal_surplus, "balance and surplus equality disagree on a matching edge");
    out.balanced_edge.push_back(balanced);
  }
  NBSTAB_ENSURE(out.ok(), "balanced outcome check failed");
  return out;
}

}  // namespace nbstab
