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

#include "nbstab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nbstab/bargain.hpp"
#include "nbstab/blockset.hpp"
#include "nbstab/errors.hpp"
#include "nbstab/graph.hpp"
#include "nbstab/matching.hpp"
#include "nbstab/oracle.hpp"
#include "nbstab/rational.hpp"

namespace nbstab::cli {

using json = nlohmann::json;

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

struct Options {
  std::string file;
  bool json_out = true;
  std::string dot_path;
  bool trace = false;
  std::string omega;
  std::uint64_t seed = 0;
  std::size_t max_size = 20;
  int n = 0;
  std::optional<std::size_t> edges;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Loaded {
  std::string digest;
  ParsedInput parsed;
  GbsInstance instance;
};

Loaded load(const std::string& path) {
  const std::string text = read_input(path);
  Loaded l{fnv1a_hex(text), parse_input(text), {}};
  if (l.parsed.has_partition || l.parsed.nu) {
    l.instance.graph = l.parsed.graph;
    l.instance.e2 = l.parsed.e2;
    l.instance.nu = l.parsed.nu ? *l.parsed.nu : static_cast<long>(max_matching(l.parsed.graph).size());
  } else {
    l.instance = root_instance(l.parsed.graph);
  }
  return l;
}

json edge_json(const Graph& g, int e) {
  const EdgeKey k = g.edge_key(e);
  return json::array({k.first, k.second});
}

json edges_json(const Graph& g, const std::vector<int>& es) {
  json a = json::array();
  for (int e : es) a.push_back(edge_json(g, e));
  return a;
}

json allocation_json(const Graph& g, const std::vector<Rational>& x) {
  json o = json::object();
  for (const auto& [v, val] : to_allocation(g, x)) o[v] = to_string(val);
  return o;
}

std::vector<int> flagged(const std::vector<bool>& f) {
  std::vector<int> out;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i]) out.push_back(static_cast<int>(i));
  return out;
}

// --omega must not undercut the exact sparsity of the input.
std::optional<Rational> checked_omega(const Options& o, const Graph& g) {
  if (o.omega.empty()) return std::nullopt;
  const Rational w = parse_rational(o.omega);
  const Rational computed = compute_sparsity(g).omega;
  if (w < computed) {
    throw InputError("--omega " + to_string(w) + " is below the computed sparsity " +
                     to_string(computed));
  }
  return w;
}

json core_json(const Graph& g, const CoreReport& core) {
  json o;
  o["status"] = core.status == CoreStatus::kEmpty ? "empty" : "nonempty";
  o["fractional_value"] = to_string(core.fractional_value);
  json iness = json::array();
  for (int v : core.inessential) iness.push_back(g.name(v));
  o["inessential"] = iness;
  if (core.stable) o["witness"] = allocation_json(g, *core.stable);
  if (core.offending_edge) o["witness_edge"] = edge_json(g, *core.offending_edge);
  return o;
}

json base_report(const std::string& command, const Loaded& in) {
  const Graph& g = in.instance.graph;
  json r;
  r["command"] = command;
  r["input_digest"] = in.digest;
  r["vertices"] = g.num_vertices();
  r["edges"] = g.num_edges();
  r["nu"] = in.instance.nu;
  return r;
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

void write_dot(const std::string& path, const Graph& g, const std::vector<bool>& blocked) {
  std::set<EdgeKey> dashed;
  for (int e : flagged(blocked)) dashed.insert(g.edge_key(e));
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << to_dot(g, dashed);
}

int cmd_analyze(const Options& o, std::ostream& out) {
  const Loaded in = load(o.file);
  const Graph& g = in.instance.graph;
  json r = base_report("analyze", in);
  const CoreReport core = core_status(g);
  r["omega"] = to_string(o.omega.empty() ? compute_sparsity(g).omega : *checked_omega(o, g));
  r["core"] = core.status == CoreStatus::kEmpty ? "empty" : "nonempty";
  r["core_report"] = core_json(g, core);
  r["matching"] = edges_json(g, max_matching(g).edges);
  emit(out, r);
  return kOk;
}

json guarantee_json(const BlockingSetResult& res) {
  json gj;
  gj["factor"] = to_string(res.guarantee_factor);
  gj["root_lp_value"] = to_string(res.root_lp_value);
  gj["bound_holds"] = res.bound_holds();
  gj["doubled"] = res.doubled;
  if (res.host_lp_value) gj["host_lp_value"] = to_string(*res.host_lp_value);
  return gj;
}

json audit_json(const IrAudit& a) {
  json j;
  j["steps"] = a.steps;
  j["lp_solves"] = a.lp_solves;
  j["fractional_points"] = a.fractional_points;
  j["bad_points"] = a.bad_points;
  j["invariant_checks"] = a.invariant_checks;
  return j;
}

json ir_trace(const BlockingSetResult& res) {
  json t = json::array();
  for (const auto& s : res.trace) t.push_back(s.to_string());
  return t;
}

BlockingSetResult run_stabilize(const Options& o, const Loaded& in, json& r) {
  const Graph& g = in.instance.graph;
  StabilizeOptions so;
  so.omega = checked_omega(o, g);
  BlockingSetResult res = stabilize(in.instance, so);
  r["omega"] = to_string(res.omega);
  r["core"] = core_status(g).status == CoreStatus::kEmpty ? "empty" : "nonempty";
  r["blocking_set"] = edges_json(g, flagged(res.blocked));
  r["guarantee"] = guarantee_json(res);
  r["ir_audit"] = audit_json(res.audit);
  if (!o.dot_path.empty()) write_dot(o.dot_path, g, res.blocked);
  return res;
}

int cmd_stabilize(const Options& o, std::ostream& out) {
  const Loaded in = load(o.file);
  json r = base_report("stabilize", in);
  const BlockingSetResult res = run_stabilize(o, in, r);
  const Graph& g = in.instance.graph;
  r["allocation"] = allocation_json(g, res.x_hat);
  const Graph reduced = g.without_edges(res.blocked);
  r["matching"] = edges_json(reduced, max_matching(reduced).edges);
  if (o.trace) r["traces"] = json{{"ir", ir_trace(res)}};
  emit(out, r);
  return kOk;
}

int cmd_balance(const Options& o, std::ostream& out) {
  const Loaded in = load(o.file);
  json r = base_report("balance", in);
  const BlockingSetResult res = run_stabilize(o, in, r);
  const BalancedOutcome bo = balanced_outcome(in.instance.graph, res);
  NBSTAB_ENSURE(bo.ok(), "balanced outcome failed its own checks");
  const Graph& red = bo.reduced;
  r["allocation"] = allocation_json(red, bo.x);
  r["alternatives"] = allocation_json(red, bo.alternative);
  r["matching"] = edges_json(red, bo.matching);

  json bal = json::object();
  for (int e : bo.matching) {
    const Edge& ed = red.edge(e);
    const Rational d = (bo.x[ed.u] - bo.alternative[ed.u]) - (bo.x[ed.v] - bo.alternative[ed.v]);
    bal[red.name(ed.u) + " " + red.name(ed.v)] = to_string(d);
  }
  r["balance_residuals"] = bal;
  const SurplusState st = surpluses(red, bo.x);
  json sur = json::object();
  for (std::size_t e = 0; e < red.num_edges(); ++e) {
    const Edge& ed = red.edge(static_cast<int>(e));
    const Rational d = st.pair(static_cast<int>(e), ed.u).value - st.pair(static_cast<int>(e), ed.v).value;
    sur[red.name(ed.u) + " " + red.name(ed.v)] = to_string(d);
  }
  r["surplus_residuals"] = sur;

  json ps;
  ps["lp_solves"] = bo.stats.lp_solves;
  ps["shifts"] = bo.stats.shifts;
  ps["rounds"] = bo.stats.rounds;
  ps["edges"] = bo.stats.edges;
  ps["final_imbalance"] = to_string(bo.stats.final_imbalance);
  r["prekernel"] = ps;

  const auto issues = oracle::verify_outcome(bo);
  if (!issues.empty()) throw InvariantViolation("outcome check failed: " + issues.front());
  if (o.trace) r["traces"] = json{{"ir", ir_trace(res)}, {"prekernel", bo.stats.trace}};
  emit(out, r);
  return kOk;
}

int cmd_min_blockset(const Options& o, std::ostream& out) {
  const Loaded in = load(o.file);
  const Graph& g = in.instance.graph;
  json r = base_report("oracle min-blockset", in);
  oracle::BruteOptions bo;
  bo.max_size = o.max_size;
  const oracle::BruteResult br = oracle::brute_min_blocking_set(g, in.instance.e2, in.instance.nu, bo);
  r["candidates"] = br.candidates;
  r["size_limit_hit"] = br.size_limit_hit;
  if (br.best) {
    r["blocking_set"] = edges_json(g, br.best->edges);
    r["size"] = br.best->edges.size();
    r["allocation"] = allocation_json(g, br.best->x);
  } else {
    r["blocking_set"] = nullptr;
    r["size"] = nullptr;
  }
  emit(out, r);
  return kOk;
}

int cmd_gen_gap(const Options& o, std::ostream& out) {
  const oracle::GapInstance gi = oracle::gen_gap(o.n);
  out << to_edge_list(gi.instance.graph, gi.instance.e2, gi.instance.nu);
  return kOk;
}

int cmd_gen_sparse(const Options& o, std::ostream& out) {
  const Rational w = o.omega.empty() ? Rational(3) : parse_rational(o.omega);
  out << to_edge_list(oracle::gen_sparse(o.n, w, o.seed, o.edges));
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stabilizers and balanced outcomes for network bargaining games", "nbstab"};
  app.require_subcommand(1);
  Options o;

  auto file_cmd = [&](CLI::App* parent, const std::string& name, const std::string& desc) {
    CLI::App* c = parent->add_subcommand(name, desc);
    c->add_option("file", o.file, "edge-list input, - for stdin")->required();
    c->add_flag("--json", o.json_out, "JSON report on stdout (default)");
    c->add_option("--omega", o.omega, "sparsity bound P/Q, at least the computed value");
    return c;
  };

  CLI::App* analyze = file_cmd(&app, "analyze", "matching number, sparsity, core status");
  CLI::App* stab = file_cmd(&app, "stabilize", "approximate minimum blocking set");
  stab->add_option("--dot", o.dot_path, "write DOT with the blocking set dashed");
  stab->add_flag("--trace", o.trace, "include rounding trace");
  CLI::App* balance = file_cmd(&app, "balance", "stabilize, then compute a balanced outcome");
  balance->add_option("--dot", o.dot_path, "write DOT with the blocking set dashed");
  balance->add_flag("--trace", o.trace, "include rounding and prekernel traces");

  CLI::App* orc = app.add_subcommand("oracle", "exact reference solvers");
  orc->require_subcommand(1);
  CLI::App* mbs = orc->add_subcommand("min-blockset", "exhaustive minimum blocking set");
  mbs->add_option("file", o.file, "edge-list input, - for stdin")->required();
  mbs->add_option("--max-size", o.max_size, "largest candidate size")->check(CLI::NonNegativeNumber);
  mbs->add_flag("--json", o.json_out, "JSON report on stdout (default)");

  CLI::App* gen = app.add_subcommand("gen", "instance generators");
  gen->require_subcommand(1);
  CLI::App* gap = gen->add_subcommand("gap", "integrality-gap instance");
  gap->add_option("--n", o.n, "family parameter")->required();
  CLI::App* sparse = gen->add_subcommand("sparse", "seeded random sparse graph");
  sparse->add_option("--n", o.n, "vertex count")->required();
  sparse->add_option("--omega", o.omega, "sparsity bound P/Q (default 3)");
  sparse->add_option("--seed", o.seed, "generator seed");
  sparse->add_option("--edges", o.edges, "edge cap");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "nbstab: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(o, out);
    if (stab->parsed()) return cmd_stabilize(o, out);
    if (balance->parsed()) return cmd_balance(o, out);
    if (mbs->parsed()) return cmd_min_blockset(o, out);
    if (gap->parsed()) return cmd_gen_gap(o, out);
    if (sparse->parsed()) return cmd_gen_sparse(o, out);
  } catch (const InputError& e) {
    err << "nbstab: input error: " << e.what() << '\n';
    return kInputError;
  } catch (const PreconditionError& e) {
    err << "nbstab: " << e.what() << '\n';
    return kInputError;
  } catch (const InvariantViolation& e) {
    err << "nbstab: invariant violated: " << e.what() << '\n';
    return kInternalError;
  } catch (const std::exception& e) {
    err << "nbstab: internal error: " << e.what() << '\n';
    return kInternalError;
  }
  err << "nbstab: no command\n";
  return kInputError;
}

}  // namespace nbstab::cli
