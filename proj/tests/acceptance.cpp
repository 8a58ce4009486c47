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

// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if
// all of them pass. Limits and tolerances are fixed below.

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nbstab/bargain.hpp"
#include "nbstab/blockset.hpp"
#include "nbstab/cli.hpp"
#include "nbstab/errors.hpp"
#include "nbstab/graph.hpp"
#include "nbstab/lp.hpp"
#include "nbstab/matching.hpp"
#include "nbstab/oracle.hpp"
#include "nbstab/rational.hpp"
#include "support.hpp"

namespace {

using namespace nbstab;
using nlohmann::json;

constexpr double kGapBaseSeconds = 10.0;
constexpr double kGapLpSeconds = 30.0;       // n = 3
constexpr double kGapExhaustiveSeconds = 300.0;  // n = 2
constexpr double kSparseSuiteSeconds = 600.0;
constexpr double kBalanceSeconds = 1.0;
constexpr int kSparseGraphs = 200;
constexpr int kSparseMaxVertices = 14;
constexpr std::size_t kSparseMaxEdges = 18;
const Rational kSparseOmega = 3;
// Exhaustive search is exponential in the blockable edges; gap n=3 has 24.
constexpr std::size_t kOracleDeterminismEdges = 20;

const std::string kData = NBSTAB_TEST_DATA_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      failures.push_back(what);
    }
  }
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string secs(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// ---------------------------------------------------------------------------
// Corpus

struct Item {
  std::string name;
  std::string path;  // file on disk, fed to the command line
  GbsInstance inst;
  bool plain = true;  // no partition and nu = nu(G)
};

GbsInstance instance_from(const ParsedInput& p) {
  if (p.has_partition || p.nu) {
    return GbsInstance{p.graph, p.e2,
                       p.nu ? *p.nu : static_cast<long>(testing::brute_matching(p.graph))};
  }
  return GbsInstance{p.graph, std::vector<bool>(p.graph.num_edges(), false),
                     static_cast<long>(testing::brute_matching(p.graph))};
}

std::vector<Item> file_corpus() {
  std::vector<std::string> paths;
  for (const auto& e : std::filesystem::directory_iterator(kData)) {
    if (e.path().extension() == ".txt") paths.push_back(e.path().string());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<Item> out;
  for (const auto& p : paths) {
    const ParsedInput parsed = parse_input(slurp(p));
    out.push_back({std::filesystem::path(p).filename().string(), p, instance_from(parsed),
                   !parsed.has_partition && !parsed.nu});
  }
  return out;
}

int sparse_vertices(int seed) { return 5 + seed % (kSparseMaxVertices - 4); }

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "nbstab_acceptance";
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<Item> sparse_corpus() {
  const auto dir = scratch_dir();
  std::vector<Item> out;
  for (int seed = 1; seed <= kSparseGraphs; ++seed) {
    const Graph g = oracle::gen_sparse(sparse_vertices(seed), kSparseOmega, static_cast<std::uint64_t>(seed),
                                       kSparseMaxEdges);
    const std::string name = "sparse_" + std::to_string(seed);
    const std::string path = (dir / (name + ".txt")).string();
    std::ofstream(path, std::ios::binary) << to_edge_list(g);
    out.push_back({name, path, root_instance(g), true});
  }
  return out;
}

std::vector<Item> gap_corpus() {
  const auto dir = scratch_dir();
  std::vector<Item> out;
  for (int n = 1; n <= 3; ++n) {
    const oracle::GapInstance gi = oracle::gen_gap(n);
    const std::string name = "gap_" + std::to_string(n);
    const std::string path = (dir / (name + ".txt")).string();
    std::ofstream(path, std::ios::binary)
        << to_edge_list(gi.instance.graph, gi.instance.e2, gi.instance.nu);
    out.push_back({name, path, gi.instance, false});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Independent checks

// Feasibility of (x, z) for the relaxation, evaluated row by row.
bool relaxation_feasible(const GbsInstance& inst, const std::vector<Rational>& x,
                         const std::vector<Rational>& z) {
  Rational total = 0;
  for (const Rational& q : x) {
    if (q < 0) return false;
    total += q;
  }
  if (total > inst.nu) return false;
  for (std::size_t e = 0; e < inst.graph.num_edges(); ++e) {
    const Edge& ed = inst.graph.edge(static_cast<int>(e));
    Rational lhs = x[static_cast<std::size_t>(ed.u)] + x[static_cast<std::size_t>(ed.v)];
    if (!inst.e2[e]) {
      if (z[e] < 0) return false;
      lhs += z[e];
    }
    if (lhs < 1) return false;
  }
  return true;
}

// Fractional values of a budget-tight point must come from one pair {a, 1 - a}.
std::string value_structure_issue(const GbsInstance& inst, const ExtremePoint& ep) {
  std::set<Rational> frac;
  for (const Rational& q : ep.x) {
    if (q != 0 && q != 1) frac.insert(q);
  }
  for (std::size_t e = 0; e < inst.graph.num_edges(); ++e) {
    if (inst.e2[e]) continue;
    const Rational& q = ep.z[e];
    if (q != 0 && q != 1) frac.insert(q);
  }
  if (frac.empty()) return "fractional point without fractional entries";
  const Rational a = *frac.begin();
  if (a <= 0 || a >= 1) return "value " + to_string(a) + " outside (0,1)";
  for (const Rational& q : frac) {
    if (q != a && q != Rational(1) - a) return "values " + to_string(a) + " and " + to_string(q);
  }
  return {};
}

// Structure of a point with no rounding certificate, recomputed from x and z.
std::vector<std::string> bad_point_issues(const GbsInstance& inst, const ExtremePoint& ep) {
  std::vector<std::string> issues;
  const Graph& g = inst.graph;
  Rational alpha = 0;
  for (const Rational& q : ep.x) {
    if (q != 0 && q != 1) alpha = std::max(alpha, q);
  }
  if (!(alpha > Rational(2, 3) && alpha < 1)) issues.push_back("alpha " + to_string(alpha));
  enum Side { kX, kY, kO, kOther };
  std::vector<Side> side(g.num_vertices(), kOther);
  std::size_t nx = 0, ny = 0;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (ep.x[v] == Rational(1) - alpha) side[v] = kX, ++nx;
    else if (ep.x[v] == alpha) side[v] = kY, ++ny;
    else if (ep.x[v] == 0) side[v] = kO;
    else issues.push_back("vertex " + g.name(static_cast<int>(v)) + " outside X, Y, O");
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(static_cast<int>(e));
    const Side a = side[static_cast<std::size_t>(ed.u)], b = side[static_cast<std::size_t>(ed.v)];
    if (!inst.e2[e] && ep.z[e] != Rational(1) - alpha) issues.push_back("(a) z on an E1 edge");
    if ((a == kY) == (b == kY)) issues.push_back("(b)/(c) edge without exactly one Y endpoint");
  }
  for (int e : ep.tight_e1) {
    const Edge& ed = g.edge(e);
    const std::set<Side> s{side[static_cast<std::size_t>(ed.u)], side[static_cast<std::size_t>(ed.v)]};
    if (s != std::set<Side>{kY, kO}) issues.push_back("(c) tight E1 edge not O-Y");
  }
  // Tight E2 edges: a spanning tree on X and Y.
  std::vector<int> parent(g.num_vertices());
  for (std::size_t v = 0; v < parent.size(); ++v) parent[v] = static_cast<int>(v);
  std::function<int(int)> find = [&](int v) {
    return parent[static_cast<std::size_t>(v)] == v ? v : parent[static_cast<std::size_t>(v)] = find(parent[static_cast<std::size_t>(v)]);
  };
  for (int e : ep.tight_e2) {
    const Edge& ed = g.edge(e);
    const std::set<Side> s{side[static_cast<std::size_t>(ed.u)], side[static_cast<std::size_t>(ed.v)]};
    if (s != std::set<Side>{kX, kY}) issues.push_back("(c) tight E2 edge not X-Y");
    const int a = find(ed.u), b = find(ed.v);
    if (a == b) issues.push_back("(c) tight E2 edges contain a cycle");
    parent[static_cast<std::size_t>(a)] = b;
  }
  std::set<int> roots;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (side[v] == kX || side[v] == kY) roots.insert(find(static_cast<int>(v)));
  }
  if (roots.size() != 1) issues.push_back("(c) tight E2 edges do not span X and Y");
  // (|X| + |Y|) / 2 < nu < |Y|
  const Rational nu = inst.nu;
  if (!(Rational(static_cast<long>(nx + ny), 2) < nu && nu < Rational(static_cast<long>(ny)))) {
    issues.push_back("budget window: |X|=" + std::to_string(nx) + " |Y|=" + std::to_string(ny) +
                     " nu=" + std::to_string(inst.nu));
  }
  return issues;
}

// Three core tests computed without the library's core routine.
struct CoreTests {
  bool lp_gap_empty;        // nu < fractional cover number
  bool inessential_empty;   // some edge joins two inessential vertices
  bool infeasible_empty;    // no x >= 0 with x(V) = nu and x_u + x_v >= 1
};

CoreTests core_tests(const Graph& g) {
  const long nu = testing::brute_matching(g);
  CoreTests t{};
  t.lp_gap_empty = Rational(nu) < oracle::fractional_cover_number(g, std::vector<bool>(g.num_edges(), false));

  std::vector<bool> iness(g.num_vertices(), false);
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    std::vector<bool> keep(g.num_vertices(), true);
    keep[v] = false;
    iness[v] = testing::brute_matching(g.induced(keep)) == nu;
  }
  t.inessential_empty = false;
  for (const Edge& ed : g.edges()) {
    if (iness[static_cast<std::size_t>(ed.u)] && iness[static_cast<std::size_t>(ed.v)]) t.inessential_empty = true;
  }

  lp::Problem p;
  std::vector<lp::Term> all;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    all.push_back({p.add_variable("x" + std::to_string(v)), 1});
  }
  p.add_constraint(all, lp::Relation::kEqual, nu);
  for (const Edge& ed : g.edges()) p.add_constraint({{ed.u, 1}, {ed.v, 1}}, lp::Relation::kGreaterEqual, 1);
  t.infeasible_empty = lp::solve(p).status == lp::Status::kInfeasible;
  return t;
}

// Surplus of i against j recomputed from the definition.
Rational surplus(const Graph& g, const std::vector<Rational>& x, int i, int j) {
  std::optional<Rational> best;
  for (int e : g.incident(i)) {
    const int k = g.other(e, i);
    if (k == j) continue;
    const Rational v = Rational(1) - x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(k)];
    if (!best || v > *best) best = v;
  }
  return best ? *best : -x[static_cast<std::size_t>(i)];
}

// ---------------------------------------------------------------------------
// Shared pipeline run over the whole corpus

struct Observed {
  std::size_t points = 0;
  std::size_t fractional_tight = 0;
  std::size_t bad = 0;
  std::vector<std::string> issues;
};

struct PipelineRun {
  const Item* item;
  BlockingSetResult res;
  std::optional<BalancedOutcome> balanced;
  std::string error;
};

std::vector<PipelineRun> run_pipeline(const std::vector<Item>& corpus, Observed& obs) {
  std::vector<PipelineRun> runs;
  for (const Item& it : corpus) {
    PipelineRun r{&it, {}, std::nullopt, {}};
    StabilizeOptions so;
    so.observe = [&](const GbsInstance& inst, const ExtremePoint& ep) {
      ++obs.points;
      if (ep.fractional && ep.budget_tight) {
        ++obs.fractional_tight;
        const std::string s = value_structure_issue(inst, ep);
        if (!s.empty()) obs.issues.push_back(it.name + ": " + s);
      }
      if (std::holds_alternative<BadPartition>(ep.classification)) {
        ++obs.bad;
        for (const auto& s : bad_point_issues(inst, ep)) obs.issues.push_back(it.name + ": " + s);
      }
    };
    try {
      r.res = stabilize(it.inst, so);
      r.balanced = balanced_outcome(it.inst.graph, r.res);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    runs.push_back(std::move(r));
  }
  return runs;
}

// ---------------------------------------------------------------------------
// Criteria

Outcome criterion1() {
  Outcome o;
  Stopwatch sw;
  const std::string path = (scratch_dir() / "gap_base.txt").string();
  const CliRun gen = cli({"gen", "gap", "--n", "1"});
  o.require(gen.code == 0, "gen gap failed: " + gen.err);
  std::ofstream(path, std::ios::binary) << gen.out;
  const CliRun st = cli({"stabilize", path});
  const CliRun orc = cli({"oracle", "min-blockset", path});
  o.require(st.code == 0 && orc.code == 0, "command failed: " + st.err + orc.err);
  std::size_t b = 0;
  json opt;
  if (st.code == 0 && orc.code == 0) {
    b = json::parse(st.out)["blocking_set"].size();
    opt = json::parse(orc.out)["size"];
  }
  const double t = sw.seconds();
  o.require(b == 8, "|B| = " + std::to_string(b));
  o.require(opt == 8, "OPT = " + opt.dump());
  o.require(t < kGapBaseSeconds, "runtime " + secs(t));
  o.detail = "gap n=1: |B|=" + std::to_string(b) + " OPT=" + opt.dump() + " in " + secs(t);
  return o;
}

Outcome criterion2() {
  Outcome o;
  std::ostringstream d;
  for (int n = 1; n <= 3; ++n) {
    Stopwatch sw;
    const oracle::GapInstance gi = oracle::gen_gap(n);
    const GbsInstance& inst = gi.instance;
    const Rational alpha(n - 1, n);
    std::vector<Rational> x(inst.graph.num_vertices(), Rational(0));
    for (int v : gi.x_side) x[static_cast<std::size_t>(v)] = Rational(1) - alpha;
    for (int v : gi.y_side) x[static_cast<std::size_t>(v)] = alpha;
    std::vector<Rational> z(inst.graph.num_edges(), Rational(0));
    Rational value = 0;
    for (std::size_t e = 0; e < z.size(); ++e) {
      if (!inst.e2[e]) z[e] = Rational(1, n), value += z[e];
    }
    o.require(relaxation_feasible(inst, x, z), "constructed point infeasible at n=" + std::to_string(n));
    o.require(value == 8, "constructed value " + to_string(value) + " at n=" + std::to_string(n));
    const Rational lp = gbs_lp_value(inst);
    o.require(lp <= 8, "LP optimum " + to_string(lp) + " at n=" + std::to_string(n));
    const double t = sw.seconds();
    if (n == 3) o.require(t < kGapLpSeconds, "n=3 runtime " + secs(t));
    d << "n=" << n << " value=" << to_string(value) << " lp=" << to_string(lp) << " (" << secs(t) << "); ";
  }
  for (int n = 1; n <= 2; ++n) {
    Stopwatch sw;
    const oracle::GapInstance gi = oracle::gen_gap(n);
    const oracle::BruteResult br =
        oracle::brute_min_blocking_set(gi.instance.graph, gi.instance.e2, gi.instance.nu);
    const double t = sw.seconds();
    o.require(br.best.has_value(), "no blocking set found at n=" + std::to_string(n));
    const long opt = br.best ? static_cast<long>(br.best->edges.size()) : -1;
    if (n == 1) o.require(opt == 8, "OPT " + std::to_string(opt) + " at n=1");
    o.require(opt >= 4 * n, "integral OPT below 4n at n=" + std::to_string(n));
    o.require(t < kGapExhaustiveSeconds, "exhaustive n=" + std::to_string(n) + " took " + secs(t));
    d << "OPT(n=" << n << ")=" << opt << " (" << secs(t) << ")" << (n == 1 ? "; " : "");
  }
  o.detail = d.str();
  return o;
}

Outcome criterion3() {
  Outcome o;
  Stopwatch sw;
  std::size_t nonzero = 0, max_b = 0;
  long max_opt = 0;
  for (int seed = 1; seed <= kSparseGraphs; ++seed) {
    const std::string tag = "seed " + std::to_string(seed);
    const Graph g = oracle::gen_sparse(sparse_vertices(seed), kSparseOmega, static_cast<std::uint64_t>(seed),
                                       kSparseMaxEdges);
    const Rational omega = compute_sparsity(g).omega;
    o.require(g.num_vertices() <= static_cast<std::size_t>(kSparseMaxVertices), tag + ": too many vertices");
    o.require(g.num_edges() <= kSparseMaxEdges, tag + ": too many edges");
    o.require(omega <= kSparseOmega, tag + ": omega " + to_string(omega));
    try {
      const BlockingSetResult res = stabilize(g);
      const oracle::BruteResult br = oracle::brute_min_blocking_set(g, res.nu);
      if (!br.best) {
        o.require(false, tag + ": oracle found no blocking set");
        continue;
      }
      const long opt = static_cast<long>(br.best->edges.size());
      const Rational b(static_cast<long>(res.size()));
      o.require(b <= (8 * omega + 2) * Rational(opt), tag + ": |B| above (8w+2) OPT");
      o.require(b <= res.guarantee_factor * res.root_lp_value, tag + ": |B| above factor * LP");
      o.require(res.root_lp_value <= Rational(opt), tag + ": LP above OPT");
      if (opt > 0) ++nonzero;
      max_b = std::max(max_b, res.size());
      max_opt = std::max(max_opt, opt);
    } catch (const std::exception& e) {
      o.require(false, tag + ": " + e.what());
    }
  }
  const double t = sw.seconds();
  o.require(t < kSparseSuiteSeconds, "runtime " + secs(t));
  o.detail = std::to_string(kSparseGraphs) + " graphs, " + std::to_string(nonzero) +
             " with OPT>0, max |B|=" + std::to_string(max_b) + " max OPT=" + std::to_string(max_opt) +
             " in " + secs(t);
  return o;
}

Outcome criterion4(const std::vector<PipelineRun>& runs) {
  Outcome o;
  std::size_t checks = 0, steps = 0;
  for (const PipelineRun& r : runs) {
    o.require(r.error.empty(), r.item->name + ": " + r.error);
    if (!r.error.empty()) continue;
    checks += r.res.audit.invariant_checks;
    steps += r.res.audit.steps;
    // One check per level plus the input itself.
    o.require(r.res.audit.invariant_checks >= r.res.audit.steps + 1, r.item->name + ": levels left unchecked");
    // Final answer, re-verified here.
    const Graph& g = r.item->inst.graph;
    Rational total = 0;
    for (const Rational& q : r.res.x_hat) total += q;
    o.require(total <= r.item->inst.nu, r.item->name + ": allocation above nu");
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      const Edge& ed = g.edge(static_cast<int>(e));
      if (!r.res.blocked[e]) {
        o.require(r.res.x_hat[static_cast<std::size_t>(ed.u)] + r.res.x_hat[static_cast<std::size_t>(ed.v)] >= 1,
                  r.item->name + ": uncovered edge");
      }
    }
    o.require(Rational(static_cast<long>(r.res.size())) <= r.res.guarantee_factor * r.res.root_lp_value,
              r.item->name + ": size bound");
  }
  o.detail = std::to_string(runs.size()) + " instances, " + std::to_string(steps) + " rounding steps, " +
             std::to_string(checks) + " level checks, 0 allowed violations";
  return o;
}

Outcome criterion5(const Observed& obs) {
  Outcome o;
  for (const auto& s : obs.issues) o.require(false, s);
  o.require(obs.bad > 0, "no bad point in the corpus");
  o.detail = std::to_string(obs.points) + " extreme points, " + std::to_string(obs.fractional_tight) +
             " fractional budget-tight, " + std::to_string(obs.bad) + " bad, " +
             std::to_string(obs.issues.size()) + " violations";
  return o;
}

Outcome criterion6(const std::vector<PipelineRun>& runs) {
  Outcome o;
  std::size_t empty = 0, nonempty = 0;
  for (const PipelineRun& r : runs) {
    if (!r.item->plain) continue;
    const Graph& g = r.item->inst.graph;
    const CoreTests t = core_tests(g);
    const bool agree = t.lp_gap_empty == t.inessential_empty && t.inessential_empty == t.infeasible_empty;
    o.require(agree, r.item->name + ": core tests disagree");
    const bool lib_empty = core_status(g).status == CoreStatus::kEmpty;
    o.require(lib_empty == t.lp_gap_empty, r.item->name + ": library core status differs");
    if (t.lp_gap_empty) {
      ++empty;
    } else {
      ++nonempty;
      o.require(r.error.empty() && r.res.size() == 0, r.item->name + ": nonempty core but |B| > 0");
    }
  }
  o.detail = std::to_string(empty + nonempty) + " graphs: " + std::to_string(empty) + " empty core, " +
             std::to_string(nonempty) + " nonempty with empty blocking set";
  return o;
}

Outcome criterion7() {
  Outcome o;
  Stopwatch sw;
  const CliRun p4 = cli({"balance", kData + "/p4.txt"});
  const CliRun one = cli({"balance", kData + "/single_edge.txt"});
  const double t = sw.seconds();
  o.require(p4.code == 0 && one.code == 0, "balance failed: " + p4.err + one.err);
  json a4, a1;
  if (p4.code == 0 && one.code == 0) {
    a4 = json::parse(p4.out)["allocation"];
    a1 = json::parse(one.out)["allocation"];
  }
  o.require(a4 == json({{"a", "1/3"}, {"b", "2/3"}, {"c", "2/3"}, {"d", "1/3"}}), "P4 gave " + a4.dump());
  o.require(a1 == json({{"u", "1/2"}, {"v", "1/2"}}), "single edge gave " + a1.dump());
  o.require(t < kBalanceSeconds, "runtime " + secs(t));
  o.detail = "P4 " + a4.dump() + ", edge " + a1.dump() + " in " + secs(t);
  return o;
}

Outcome criterion8(const std::vector<PipelineRun>& runs) {
  Outcome o;
  std::size_t lps = 0, shifts = 0, worst_lp = 0;
  for (const PipelineRun& r : runs) {
    if (!r.balanced) {
      o.require(false, r.item->name + ": no balanced outcome: " + r.error);
      continue;
    }
    const BalancedOutcome& b = *r.balanced;
    const std::size_t m = b.reduced.num_edges();
    o.require(b.stats.lp_solves <= m, r.item->name + ": LP solves above |E'|");
    o.require(b.stats.shifts <= m * m, r.item->name + ": shifts above |E'|^2");
    o.require(b.stats.final_imbalance == 0, r.item->name + ": final imbalance " + to_string(b.stats.final_imbalance));
    for (std::size_t e = 0; e < m; ++e) {
      const Edge& ed = b.reduced.edge(static_cast<int>(e));
      o.require(surplus(b.reduced, b.x, ed.u, ed.v) == surplus(b.reduced, b.x, ed.v, ed.u),
                r.item->name + ": unbalanced surplus on an edge");
    }
    for (const auto& s : oracle::verify_outcome(b)) o.require(false, r.item->name + ": " + s);
    lps += b.stats.lp_solves;
    shifts += b.stats.shifts;
    worst_lp = std::max(worst_lp, b.stats.lp_solves);
  }
  o.detail = std::to_string(runs.size()) + " outcomes, " + std::to_string(lps) + " LP solves, " +
             std::to_string(shifts) + " shifts, max per run " + std::to_string(worst_lp);
  return o;
}

Outcome criterion9(const std::vector<Item>& corpus) {
  Outcome o;
  std::size_t compared = 0, skipped_oracle = 0;
  for (const Item& it : corpus) {
    std::vector<std::vector<std::string>> cmds = {
        {"analyze", it.path},
        {"stabilize", it.path, "--trace"},
        {"balance", it.path, "--trace"}};
    const auto blockable = static_cast<std::size_t>(std::count(it.inst.e2.begin(), it.inst.e2.end(), false));
    if (blockable <= kOracleDeterminismEdges) {
      cmds.push_back({"oracle", "min-blockset", it.path});
    } else {
      ++skipped_oracle;
    }
    for (const auto& args : cmds) {
      const CliRun a = cli(args);
      const CliRun b = cli(args);
      o.require(a.code == 0, it.name + ": " + args[0] + " exited " + std::to_string(a.code) + " " + a.err);
      o.require(a.code == b.code && a.out == b.out, it.name + ": " + args[0] + " output differs");
      ++compared;
    }
  }
  for (int seed = 1; seed <= 5; ++seed) {
    const std::vector<std::string> args = {"gen", "sparse", "--n", "12", "--seed", std::to_string(seed)};
    o.require(cli(args).out == cli(args).out, "gen sparse differs at seed " + std::to_string(seed));
    ++compared;
  }
  o.detail = std::to_string(compared) + " command pairs compared (oracle skipped on " +
             std::to_string(skipped_oracle) + " instances above " + std::to_string(kOracleDeterminismEdges) +
             " blockable edges)";
  return o;
}

}  // namespace

int main() {
  std::vector<Item> corpus = file_corpus();
  for (auto& it : gap_corpus()) corpus.push_back(std::move(it));
  for (auto& it : sparse_corpus()) corpus.push_back(std::move(it));

  Observed obs;
  std::vector<PipelineRun> runs;
  try {
    runs = run_pipeline(corpus, obs);
  } catch (const std::exception& e) {
    std::cerr << "pipeline aborted: " << e.what() << '\n';
    return 2;
  }

  const std::vector<std::function<Outcome()>> criteria = {
      criterion1,
      criterion2,
      criterion3,
      [&] { return criterion4(runs); },
      [&] { return criterion5(obs); },
      [&] { return criterion6(runs); },
      criterion7,
      [&] { return criterion8(runs); },
      [&] { return criterion9(corpus); },
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i]();
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << i + 1 << ": " << (out.pass ? "PASS" : "FAIL") << "  " << out.detail << std::endl;
    const std::size_t shown = std::min<std::size_t>(out.failures.size(), 5);
    for (std::size_t k = 0; k < shown; ++k) std::cout << "    " << out.failures[k] << '\n';
    if (out.failures.size() > shown) std::cout << "    ... " << out.failures.size() - shown << " more\n";
    if (!out.pass) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
  return failed == 0 ? 0 : 1;
}
