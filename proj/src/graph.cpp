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

#include "nbstab/graph.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "nbstab/errors.hpp"

namespace nbstab {

EdgeKey make_edge_key(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

Allocation to_allocation(const Graph& g, const std::vector<Rational>& x) {
  Allocation out;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) out.emplace(g.name(static_cast<int>(v)), x[v]);
  return out;
}

Graph Graph::from_edges(const std::vector<std::string>& vertices,
                        const std::vector<EdgeKey>& edges) {
  Graph g;
  std::set<std::string> names(vertices.begin(), vertices.end());
  for (const auto& [a, b] : edges) {
    if (a == b) throw InputError("self-loop at vertex '" + a + "'");
    names.insert(a);
    names.insert(b);
  }
  g.names_.assign(names.begin(), names.end());
  for (std::size_t i = 0; i < g.names_.size(); ++i) {
    g.index_.emplace(g.names_[i], static_cast<int>(i));
  }
  std::set<Edge> unique;
  for (const auto& [a, b] : edges) {
    int u = g.index_.find(a)->second;
    int v = g.index_.find(b)->second;
    if (v < u) std::swap(u, v);
    unique.insert({u, v});
  }
  g.edges_.assign(unique.begin(), unique.end());
  g.incident_.assign(g.names_.size(), {});
  for (std::size_t e = 0; e < g.edges_.size(); ++e) {
    g.incident_[static_cast<std::size_t>(g.edges_[e].u)].push_back(static_cast<int>(e));
    g.incident_[static_cast<std::size_t>(g.edges_[e].v)].push_back(static_cast<int>(e));
  }
  for (std::size_t v = 0; v < g.incident_.size(); ++v) {
    auto& inc = g.incident_[v];
    std::sort(inc.begin(), inc.end(), [&](int a, int b) {
      return g.other(a, static_cast<int>(v)) < g.other(b, static_cast<int>(v));
    });
  }
  return g;
}

std::optional<int> Graph::index_of(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Graph::edge_index(int a, int b) const {
  if (b < a) std::swap(a, b);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{a, b});
  if (it == edges_.end() || it->u != a || it->v != b) return std::nullopt;
  return static_cast<int>(it - edges_.begin());
}

std::optional<int> Graph::edge_index(const EdgeKey& key) const {
  auto a = index_of(key.first);
  auto b = index_of(key.second);
  if (!a || !b) return std::nullopt;
  return edge_index(*a, *b);
}

EdgeKey Graph::edge_key(int e) const {
  return {name(edge(e).u), name(edge(e).v)};
}

Graph Graph::without_edges(const std::vector<bool>& drop) const {
  std::vector<EdgeKey> kept;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (!drop[e]) kept.push_back(edge_key(static_cast<int>(e)));
  }
  return from_edges(names_, kept);
}

Graph Graph::induced(const std::vector<bool>& keep) const {
  std::vector<std::string> vs;
  for (std::size_t v = 0; v < names_.size(); ++v) {
    if (keep[v]) vs.push_back(names_[v]);
  }
  std::vector<EdgeKey> es;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    if (keep[static_cast<std::size_t>(ed.u)] && keep[static_cast<std::size_t>(ed.v)]) {
      es.push_back(edge_key(static_cast<int>(e)));
    }
  }
  return from_edges(vs, es);
}

// ---------------------------------------------------------------------------
// Text formats

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw InputError("line " + std::to_string(line_no) + ": " + what);
}

long parse_budget(const std::string& tok, std::size_t line_no) {
  Rational r;
  try {
    r = parse_rational(tok);
  } catch (const InputError&) {
    fail(line_no, "bad nu value '" + tok + "'");
  }
  if (!is_integer(r) || r < 0 || !r.get_num().fits_slong_p()) {
    fail(line_no, "nu must be a non-negative integer, got '" + tok + "'");
  }
  return r.get_num().get_si();
}

}  // namespace

ParsedInput parse_input(std::string_view text) {
  std::vector<std::string> isolated;
  std::map<EdgeKey, bool> tagged;  // edge -> is E2
  std::optional<long> nu;
  bool any_tag = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    auto line = trim(raw);
    if (line.empty()) continue;
    if (line.starts_with("#@")) {
      auto toks = split_ws(line.substr(2));
      if (toks.size() != 2) fail(line_no, "malformed directive");
      if (toks[0] == "nu") {
        long v = parse_budget(toks[1], line_no);
        if (nu && *nu != v) fail(line_no, "conflicting nu directives");
        nu = v;
      } else if (toks[0] == "vertex") {
        if (toks[1].find('#') != std::string::npos) fail(line_no, "'#' in vertex id");
        isolated.push_back(toks[1]);
      } else {
        fail(line_no, "unknown directive '" + toks[0] + "'");
      }
      continue;
    }
    if (line.front() == '#') continue;

    auto toks = split_ws(line);
    if (toks.size() < 2 || toks.size() > 3) fail(line_no, "expected 'u v' or 'u v e1|e2'");
    for (std::size_t i = 0; i < 2; ++i) {
      if (toks[i].find('#') != std::string::npos) fail(line_no, "'#' in vertex id");
    }
    bool is_e2 = false;
    if (toks.size() == 3) {
      if (toks[2] == "e2") {
        is_e2 = true;
      } else if (toks[2] != "e1") {
        fail(line_no, "unknown edge class '" + toks[2] + "'");
      }
      any_tag = true;
    }
    if (toks[0] == toks[1]) fail(line_no, "self-loop at vertex '" + toks[0] + "'");
    auto key = make_edge_key(toks[0], toks[1]);
    auto [it, inserted] = tagged.emplace(key, is_e2);
    if (!inserted && it->second != is_e2) fail(line_no, "edge listed in both E1 and E2");
  }

  std::vector<EdgeKey> edges;
  edges.reserve(tagged.size());
  for (const auto& [k, _] : tagged) edges.push_back(k);

  ParsedInput out;
  out.graph = Graph::from_edges(isolated, edges);
  out.e2.assign(out.graph.num_edges(), false);
  for (const auto& [k, is_e2] : tagged) {
    out.e2[static_cast<std::size_t>(*out.graph.edge_index(k))] = is_e2;
  }
  out.has_partition = any_tag;
  out.nu = nu;
  return out;
}

Graph parse_edge_list(std::string_view text) { return parse_input(text).graph; }

std::string to_edge_list(const Graph& g) { return to_edge_list(g, {}, std::nullopt); }

std::string to_edge_list(const Graph& g, const std::vector<bool>& e2,
                         std::optional<long> nu) {
  std::ostringstream out;
  if (nu) out << "#@ nu " << *nu << '\n';
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (g.degree(static_cast<int>(v)) == 0) out << "#@ vertex " << g.name(static_cast<int>(v)) << '\n';
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(static_cast<int>(e));
    out << g.name(ed.u) << ' ' << g.name(ed.v);
    if (!e2.empty()) out << (e2[e] ? " e2" : " e1");
    out << '\n';
  }
  return out.str();
}

std::string to_json(const Graph& g) {
  nlohmann::json j;
  j["vertices"] = g.vertices();
  auto edges = nlohmann::json::array();
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    auto [a, b] = g.edge_key(static_cast<int>(e));
    edges.push_back({a, b});
  }
  j["edges"] = edges;
  return j.dump();
}

Graph graph_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    std::vector<std::string> vs = j.at("vertices").get<std::vector<std::string>>();
    std::vector<EdgeKey> es;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw InputError("edge must be a pair");
      es.push_back(make_edge_key(e[0].get<std::string>(), e[1].get<std::string>()));
    }
    return Graph::from_edges(vs, es);
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(std::string("bad graph JSON: ") + ex.what());
  }
}

std::string to_dot(const Graph& g, const std::set<EdgeKey>& dashed) {
  std::ostringstream out;
  out << "graph G {\n";
  for (const auto& v : g.vertices()) out << "  \"" << v << "\";\n";
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    auto key = g.edge_key(static_cast<int>(e));
    out << "  \"" << key.first << "\" -- \"" << key.second << '"';
    if (dashed.count(key)) out << " [style=dashed]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Sparsity

std::size_t induced_edge_count(const Graph& g, const std::vector<bool>& in_set) {
  std::size_t count = 0;
  for (const Edge& e : g.edges()) {
    if (in_set[static_cast<std::size_t>(e.u)] && in_set[static_cast<std::size_t>(e.v)]) ++count;
  }
  return count;
}

namespace {

Sparsity finish(const Graph& g, const Rational& density, const std::vector<bool>& witness) {
  Sparsity s;
  s.density = density;
  s.omega = density > 1 ? density : Rational(1);
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (witness[v]) s.witness.push_back(g.name(static_cast<int>(v)));
  }
  return s;
}

// Dinic max-flow on int64 capacities; only what the density cut needs.
class MaxFlow {
 public:
  explicit MaxFlow(int n) : adj_(static_cast<std::size_t>(n)), level_(adj_.size()), it_(adj_.size()) {}

  void add_arc(int from, int to, std::int64_t cap) {
    adj_[static_cast<std::size_t>(from)].push_back({to, cap, adj_[static_cast<std::size_t>(to)].size()});
    adj_[static_cast<std::size_t>(to)].push_back({from, 0, adj_[static_cast<std::size_t>(from)].size() - 1});
  }

  std::int64_t run(int s, int t) {
    std::int64_t flow = 0;
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (std::int64_t f = dfs(s, t, std::numeric_limits<std::int64_t>::max())) flow += f;
    }
    return flow;
  }

  /// Nodes reachable from s in the residual graph (after run()).
  std::vector<bool> source_side(int s) const {
    std::vector<bool> seen(adj_.size(), false);
    std::deque<int> q{s};
    seen[static_cast<std::size_t>(s)] = true;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (const Arc& a : adj_[static_cast<std::size_t>(u)]) {
        if (a.cap > 0 && !seen[static_cast<std::size_t>(a.to)]) {
          seen[static_cast<std::size_t>(a.to)] = true;
          q.push_back(a.to);
        }
      }
    }
    return seen;
  }

 private:
  struct Arc {
    int to;
    std::int64_t cap;
    std::size_t rev;
  };

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::deque<int> q{s};
    level_[static_cast<std::size_t>(s)] = 0;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (const Arc& a : adj_[static_cast<std::size_t>(u)]) {
        if (a.cap > 0 && level_[static_cast<std::size_t>(a.to)] < 0) {
          level_[static_cast<std::size_t>(a.to)] = level_[static_cast<std::size_t>(u)] + 1;
          q.push_back(a.to);
        }
      }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
  }

  std::int64_t dfs(int u, int t, std::int64_t limit) {
    if (u == t) return limit;
    auto& arcs = adj_[static_cast<std::size_t>(u)];
    for (std::size_t& i = it_[static_cast<std::size_t>(u)]; i < arcs.size(); ++i) {
      Arc& a = arcs[i];
      if (a.cap <= 0 || level_[static_cast<std::size_t>(a.to)] != level_[static_cast<std::size_t>(u)] + 1) continue;
      std::int64_t f = dfs(a.to, t, std::min(limit, a.cap));
      if (f > 0) {
        a.cap -= f;
        adj_[static_cast<std::size_t>(a.to)][a.rev].cap += f;
        return f;
      }
    }
    return 0;
  }

  std::vector<std::vector<Arc>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
};

}  // namespace

namespace detail {

Sparsity sparsity_brute_force(const Graph& g) {
  const std::size_t n = g.num_vertices();
  NBSTAB_ENSURE(n <= 22, "brute-force sparsity limited to 22 vertices");
  std::vector<bool> best_set(n, false);
  if (n == 0) return finish(g, Rational(0), best_set);

  std::vector<std::uint32_t> adj(n, 0);
  for (const Edge& e : g.edges()) {
    adj[static_cast<std::size_t>(e.u)] |= 1u << e.v;
    adj[static_cast<std::size_t>(e.v)] |= 1u << e.u;
  }
  const std::uint32_t full = static_cast<std::uint32_t>((std::uint64_t{1} << n) - 1);
  std::vector<std::uint32_t> count(std::size_t{full} + 1, 0);
  std::uint64_t best_e = 0, best_s = 1;
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 1; mask != 0 && mask <= full; ++mask) {
    int low = std::countr_zero(mask);
    std::uint32_t rest = mask & (mask - 1);
    count[mask] = count[rest] + static_cast<std::uint32_t>(std::popcount(adj[static_cast<std::size_t>(low)] & rest));
    std::uint64_t s = static_cast<std::uint64_t>(std::popcount(mask));
    if (best_mask == 0 || count[mask] * best_s > best_e * s) {
      best_e = count[mask];
      best_s = s;
      best_mask = mask;
    }
  }
  for (std::size_t v = 0; v < n; ++v) best_set[v] = (best_mask >> v) & 1u;
  return finish(g, ratio(static_cast<long>(best_e), static_cast<long>(best_s)), best_set);
}

// Dinkelbach iteration on the edge/vertex closure network: for the current
// density p/q, a min cut yields the S maximising q|E(S)| - p|S|; a positive
// value gives a strictly denser S, zero certifies p/q as the maximum.
Sparsity sparsity_max_flow(const Graph& g) {
  const int n = static_cast<int>(g.num_vertices());
  const int m = static_cast<int>(g.num_edges());
  std::vector<bool> witness(static_cast<std::size_t>(n), true);
  if (n == 0) return finish(g, Rational(0), witness);
  Rational density = ratio(m, n);

  while (true) {
    const std::int64_t p = density.get_num().get_si();
    const std::int64_t q = density.get_den().get_si();
    const int s = n + m, t = n + m + 1;
    MaxFlow flow(n + m + 2);
    const std::int64_t inf = q * (m + 1) + 1;
    for (int e = 0; e < m; ++e) {
      flow.add_arc(s, n + e, q);
      flow.add_arc(n + e, g.edge(e).u, inf);
      flow.add_arc(n + e, g.edge(e).v, inf);
    }
    for (int v = 0; v < n; ++v) flow.add_arc(v, t, p);
    std::int64_t cut = flow.run(s, t);
    std::int64_t best = q * m - cut;
    if (best <= 0) break;
    auto side = flow.source_side(s);
    std::vector<bool> sub(side.begin(), side.begin() + n);
    std::size_t verts = static_cast<std::size_t>(std::count(sub.begin(), sub.end(), true));
    NBSTAB_ENSURE(verts > 0, "positive cut value needs a non-empty vertex set");
    Rational next = ratio(static_cast<long>(induced_edge_count(g, sub)), static_cast<long>(verts));
    NBSTAB_ENSURE(next > density, "Dinkelbach step must strictly increase density");
    density = next;
    witness = sub;
  }
  return finish(g, density, witness);
}

}  // namespace detail

Sparsity compute_sparsity(const Graph& g) {
  if (g.num_vertices() <= kBruteForceSparsityLimit) return detail::sparsity_brute_force(g);
  return detail::sparsity_max_flow(g);
}

// ---------------------------------------------------------------------------
// Bipartite doubling

DoubledGraph bipartite_double(const Graph& g) {
  std::vector<std::string> vs;
  std::vector<EdgeKey> es;
  for (const auto& v : g.vertices()) {
    vs.push_back(v + "#1");
    vs.push_back(v + "#2");
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    auto [a, b] = g.edge_key(static_cast<int>(e));
    es.push_back(make_edge_key(a + "#1", b + "#2"));
    es.push_back(make_edge_key(a + "#2", b + "#1"));
  }
  DoubledGraph d;
  d.host = Graph::from_edges(vs, es);
  for (const auto& v : g.vertices()) {
    d.side_map.emplace_back(*d.host.index_of(v + "#1"), *d.host.index_of(v + "#2"));
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    auto [a, b] = g.edge_key(static_cast<int>(e));
    d.edge_map.emplace_back(*d.host.edge_index(make_edge_key(a + "#1", b + "#2")),
                            *d.host.edge_index(make_edge_key(a + "#2", b + "#1")));
  }
  return d;
}

PulledBack pull_back(const DoubledGraph& d, const std::vector<Rational>& x_host,
                     const std::vector<bool>& blocked_host) {
  PulledBack out;
  for (const auto& [c1, c2] : d.side_map) {
    out.x.push_back((x_host[static_cast<std::size_t>(c1)] + x_host[static_cast<std::size_t>(c2)]) / 2);
  }
  for (const auto& [h1, h2] : d.edge_map) {
    out.blocked.push_back(blocked_host[static_cast<std::size_t>(h1)] ||
                          blocked_host[static_cast<std::size_t>(h2)]);
  }
  return out;
}

std::optional<std::vector<int>> is_bipartite(const Graph& g) {
  std::vector<int> colour(g.num_vertices(), -1);
  for (std::size_t start = 0; start < g.num_vertices(); ++start) {
    if (colour[start] >= 0) continue;
    colour[start] = 0;
    std::deque<int> q{static_cast<int>(start)};
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int e : g.incident(u)) {
        int w = g.other(e, u);
        if (colour[static_cast<std::size_t>(w)] < 0) {
          colour[static_cast<std::size_t>(w)] = 1 - colour[static_cast<std::size_t>(u)];
          q.push_back(w);
        } else if (colour[static_cast<std::size_t>(w)] == colour[static_cast<std::size_t>(u)]) {
          return std::nullopt;
        }
      }
    }
  }
  return colour;
}

}  // namespace nbstab
