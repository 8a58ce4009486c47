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

#include "nbstab/lp.hpp"

#include <algorithm>
#include <sstream>

#include "nbstab/errors.hpp"

namespace nbstab::lp {

int Problem::add_variable(std::string name, Rational cost, std::optional<Rational> lower,
                          std::optional<Rational> upper) {
  vars_.push_back({std::move(name), std::move(lower), std::move(upper), std::move(cost)});
  return static_cast<int>(vars_.size()) - 1;
}

int Problem::add_constraint(std::vector<Term> terms, Relation rel, Rational rhs,
                            std::string name) {
  for (const Term& t : terms) {
    if (t.var < 0 || static_cast<std::size_t>(t.var) >= vars_.size()) {
      throw PreconditionError("constraint '" + name + "' references unknown variable");
    }
  }
  rows_.push_back({std::move(terms), rel, std::move(rhs), std::move(name)});
  return static_cast<int>(rows_.size()) - 1;
}

Rational Problem::row_activity(std::size_t row, const std::vector<Rational>& x) const {
  Rational sum = 0;
  for (const Term& t : rows_[row].terms) sum += t.coeff * x[static_cast<std::size_t>(t.var)];
  return sum;
}

Rational Problem::objective_value(const std::vector<Rational>& x) const {
  Rational sum = 0;
  for (std::size_t j = 0; j < vars_.size(); ++j) sum += vars_[j].cost * x[j];
  return sum;
}

namespace {

const char* rel_text(Relation r) {
  switch (r) {
    case Relation::kLessEqual: return "<=";
    case Relation::kEqual: return "=";
    case Relation::kGreaterEqual: return ">=";
  }
  return "?";
}

}  // namespace

std::string Problem::dump() const {
  std::ostringstream out;
  out << (sense_ == Sense::kMinimize ? "minimize" : "maximize");
  for (const auto& v : vars_) {
    if (v.cost != 0) out << ' ' << nbstab::to_string(v.cost) << '*' << v.name;
  }
  out << "\nsubject to\n";
  for (const auto& r : rows_) {
    out << "  " << (r.name.empty() ? "_" : r.name) << ':';
    for (const Term& t : r.terms) {
      out << ' ' << nbstab::to_string(t.coeff) << '*' << vars_[static_cast<std::size_t>(t.var)].name;
    }
    out << ' ' << rel_text(r.rel) << ' ' << nbstab::to_string(r.rhs) << '\n';
  }
  out << "bounds\n";
  for (const auto& v : vars_) {
    out << "  " << (v.lower ? nbstab::to_string(*v.lower) : "-inf") << " <= " << v.name
        << " <= " << (v.upper ? nbstab::to_string(*v.upper) : "+inf") << '\n';
  }
  return out.str();
}

std::string to_string(Status s) {
  switch (s) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Simplex

namespace {

struct InternalRow {
  std::vector<std::pair<int, Rational>> terms;  // internal column, coefficient
  Relation rel;
  Rational rhs;
  int user_row;   // >= 0: user constraint index
  int upper_var;  // >= 0: upper-bound row of this user variable
  int sign = 1;   // -1 if negated to make rhs >= 0
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : t_(rows, std::vector<Rational>(cols + 1)), obj_(cols + 1), basis_(rows, -1), cols_(cols) {}

  Rational& at(std::size_t r, std::size_t c) { return t_[r][c]; }
  const Rational& at(std::size_t r, std::size_t c) const { return t_[r][c]; }
  Rational& rhs(std::size_t r) { return t_[r][cols_]; }
  const Rational& rhs(std::size_t r) const { return t_[r][cols_]; }
  std::vector<Rational>& obj() { return obj_; }
  std::vector<int>& basis() { return basis_; }
  std::size_t rows() const { return t_.size(); }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t r, std::size_t c) {
    auto& prow = t_[r];
    Rational inv = 1 / prow[c];
    nz_.clear();
    for (std::size_t k = 0; k <= cols_; ++k) {
      if (sgn(prow[k]) != 0) {
        prow[k] *= inv;
        nz_.push_back(k);
      }
    }
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (i != r) eliminate(t_[i], prow, c);
    }
    eliminate(obj_, prow, c);
    basis_[r] = static_cast<int>(c);
    ++pivots_;
  }

  void erase_row(std::size_t r) {
    t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  int pivots() const { return pivots_; }

 private:
  void eliminate(std::vector<Rational>& row, const std::vector<Rational>& prow, std::size_t c) {
    if (sgn(row[c]) == 0) return;
    Rational f = row[c];
    for (std::size_t k : nz_) {
      mpq_mul(tmp_.get_mpq_t(), f.get_mpq_t(), prow[k].get_mpq_t());
      mpq_sub(row[k].get_mpq_t(), row[k].get_mpq_t(), tmp_.get_mpq_t());
    }
  }

  std::vector<std::vector<Rational>> t_;
  std::vector<Rational> obj_;
  std::vector<int> basis_;
  std::size_t cols_;
  std::vector<std::size_t> nz_;
  Rational tmp_;
  int pivots_ = 0;
};

enum class Outcome { kOptimal, kUnbounded };

// Bland's rule: lowest-index improving column enters; ratio ties leave by
// lowest basic column index.
Outcome run_simplex(Tableau& tab, const std::vector<bool>& may_enter) {
  while (true) {
    auto& obj = tab.obj();
    std::size_t enter = tab.cols();
    for (std::size_t j = 0; j < tab.cols(); ++j) {
      if (may_enter[j] && sgn(obj[j]) < 0) {
        enter = j;
        break;
      }
    }
    if (enter == tab.cols()) return Outcome::kOptimal;

    std::size_t leave = tab.rows();
    Rational best_ratio;
    for (std::size_t r = 0; r < tab.rows(); ++r) {
      if (sgn(tab.at(r, enter)) <= 0) continue;
      Rational ratio = tab.rhs(r) / tab.at(r, enter);
      if (leave == tab.rows() || ratio < best_ratio ||
          (ratio == best_ratio && tab.basis()[r] < tab.basis()[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave == tab.rows()) return Outcome::kUnbounded;
    tab.pivot(leave, enter);
  }
}

}  // namespace

Solution solve(const Problem& p) {
  const auto& vars = p.variables();
  const auto& urows = p.constraints();
  const int sense = p.sense() == Sense::kMinimize ? 1 : -1;

  // Structural columns: x = lower + x' or x = x+ - x- for free variables.
  std::vector<int> col_of(vars.size()), neg_col_of(vars.size(), -1);
  int ncols = 0;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    col_of[j] = ncols++;
    if (!vars[j].lower) neg_col_of[j] = ncols++;
  }

  std::vector<InternalRow> rows;
  for (std::size_t i = 0; i < urows.size(); ++i) {
    InternalRow r{{}, urows[i].rel, urows[i].rhs, static_cast<int>(i), -1};
    for (const Term& t : urows[i].terms) {
      const auto j = static_cast<std::size_t>(t.var);
      r.terms.emplace_back(col_of[j], t.coeff);
      if (neg_col_of[j] >= 0) r.terms.emplace_back(neg_col_of[j], -t.coeff);
      if (vars[j].lower) r.rhs -= t.coeff * *vars[j].lower;
    }
    rows.push_back(std::move(r));
  }
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (!vars[j].upper) continue;
    InternalRow r{{{col_of[j], Rational(1)}}, Relation::kLessEqual, *vars[j].upper, -1,
                  static_cast<int>(j)};
    if (neg_col_of[j] >= 0) r.terms.emplace_back(neg_col_of[j], Rational(-1));
    if (vars[j].lower) r.rhs -= *vars[j].lower;
    rows.push_back(std::move(r));
  }
  for (auto& r : rows) {
    if (sgn(r.rhs) < 0) {
      r.sign = -1;
      r.rhs = -r.rhs;
      for (auto& [c, a] : r.terms) a = -a;
      if (r.rel == Relation::kLessEqual) {
        r.rel = Relation::kGreaterEqual;
      } else if (r.rel == Relation::kGreaterEqual) {
        r.rel = Relation::kLessEqual;
      }
    }
  }

  const std::size_t m = rows.size();
  std::vector<int> slack_col(m, -1), art_col(m, -1), unit_col(m, -1);
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].rel != Relation::kEqual) slack_col[i] = ncols++;
  }
  const int first_art = ncols;
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].rel != Relation::kLessEqual) art_col[i] = ncols++;
    unit_col[i] = rows[i].rel == Relation::kLessEqual ? slack_col[i] : art_col[i];
  }

  Tableau tab(m, static_cast<std::size_t>(ncols));
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& [c, a] : rows[i].terms) tab.at(i, static_cast<std::size_t>(c)) += a;
    if (slack_col[i] >= 0) {
      tab.at(i, static_cast<std::size_t>(slack_col[i])) =
          rows[i].rel == Relation::kLessEqual ? 1 : -1;
    }
    if (art_col[i] >= 0) tab.at(i, static_cast<std::size_t>(art_col[i])) = 1;
    tab.rhs(i) = rows[i].rhs;
    tab.basis()[i] = unit_col[i];
  }
  // A dropped tableau row removes the constraint whose artificial is basic
  // in it; pivots may have moved that artificial away from its own row.
  std::vector<bool> kept(m, true);
  std::vector<int> row_of_art(static_cast<std::size_t>(ncols), -1);
  for (std::size_t i = 0; i < m; ++i) {
    if (art_col[i] >= 0) row_of_art[static_cast<std::size_t>(art_col[i])] = static_cast<int>(i);
  }

  Solution sol;

  // Phase 1: minimise the sum of artificials.
  {
    auto& obj = tab.obj();
    for (std::size_t k = 0; k <= static_cast<std::size_t>(ncols); ++k) obj[k] = 0;
    for (int c = first_art; c < ncols; ++c) obj[static_cast<std::size_t>(c)] = 1;
    for (std::size_t i = 0; i < m; ++i) {
      if (art_col[i] < 0) continue;
      for (std::size_t k = 0; k <= static_cast<std::size_t>(ncols); ++k) obj[k] -= tab.at(i, k);
    }
    std::vector<bool> may_enter(static_cast<std::size_t>(ncols), true);
    run_simplex(tab, may_enter);
    if (sgn(obj[static_cast<std::size_t>(ncols)]) != 0) {
      sol.status = Status::kInfeasible;
      sol.farkas.assign(urows.size(), Rational(0));
      for (std::size_t i = 0; i < m; ++i) {
        if (rows[i].user_row < 0) continue;
        Rational c1 = art_col[i] >= 0 ? 1 : 0;
        sol.farkas[static_cast<std::size_t>(rows[i].user_row)] =
            rows[i].sign * (c1 - obj[static_cast<std::size_t>(unit_col[i])]);
      }
      sol.pivots = tab.pivots();
      return sol;
    }
  }

  // Drive zero-valued artificials out of the basis; drop redundant rows.
  for (std::size_t r = 0; r < tab.rows();) {
    if (tab.basis()[r] < first_art) {
      ++r;
      continue;
    }
    int repl = -1;
    for (int c = 0; c < first_art; ++c) {
      if (sgn(tab.at(r, static_cast<std::size_t>(c))) != 0) {
        repl = c;
        break;
      }
    }
    if (repl >= 0) {
      tab.pivot(r, static_cast<std::size_t>(repl));
      ++r;
    } else {
      kept[static_cast<std::size_t>(row_of_art[static_cast<std::size_t>(tab.basis()[r])])] = false;
      tab.erase_row(r);
    }
  }

  // Phase 2.
  std::vector<Rational> cost(static_cast<std::size_t>(ncols));
  for (std::size_t j = 0; j < vars.size(); ++j) {
    cost[static_cast<std::size_t>(col_of[j])] = sense * vars[j].cost;
    if (neg_col_of[j] >= 0) cost[static_cast<std::size_t>(neg_col_of[j])] = -sense * vars[j].cost;
  }
  {
    auto& obj = tab.obj();
    for (std::size_t k = 0; k < static_cast<std::size_t>(ncols); ++k) obj[k] = cost[k];
    obj[static_cast<std::size_t>(ncols)] = 0;
    for (std::size_t r = 0; r < tab.rows(); ++r) {
      const Rational& cb = cost[static_cast<std::size_t>(tab.basis()[r])];
      if (sgn(cb) == 0) continue;
      for (std::size_t k = 0; k <= static_cast<std::size_t>(ncols); ++k) obj[k] -= cb * tab.at(r, k);
    }
  }
  std::vector<bool> may_enter(static_cast<std::size_t>(ncols), true);
  for (int c = first_art; c < ncols; ++c) may_enter[static_cast<std::size_t>(c)] = false;
  Outcome outcome = run_simplex(tab, may_enter);

  std::vector<Rational> value(static_cast<std::size_t>(ncols));
  std::vector<bool> basic(static_cast<std::size_t>(ncols), false);
  for (std::size_t r = 0; r < tab.rows(); ++r) {
    value[static_cast<std::size_t>(tab.basis()[r])] = tab.rhs(r);
    basic[static_cast<std::size_t>(tab.basis()[r])] = true;
  }
  sol.primal.resize(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j) {
    Rational v = value[static_cast<std::size_t>(col_of[j])];
    if (vars[j].lower) {
      v += *vars[j].lower;
    } else {
      v -= value[static_cast<std::size_t>(neg_col_of[j])];
    }
    sol.primal[j] = v;
  }
  sol.objective = p.objective_value(sol.primal);
  sol.pivots = tab.pivots();
  if (outcome == Outcome::kUnbounded) {
    sol.status = Status::kUnbounded;
    return sol;
  }
  sol.status = Status::kOptimal;

  // Duals: y_int = -reduced cost of the row's unit column.
  sol.duals.assign(urows.size(), Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].user_row < 0 || !kept[i]) continue;
    Rational y = -tab.obj()[static_cast<std::size_t>(unit_col[i])];
    sol.duals[static_cast<std::size_t>(rows[i].user_row)] = sense * rows[i].sign * y;
  }
  sol.reduced_costs.resize(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j) sol.reduced_costs[j] = vars[j].cost;
  for (std::size_t i = 0; i < urows.size(); ++i) {
    if (sgn(sol.duals[i]) == 0) continue;
    for (const Term& t : urows[i].terms) {
      sol.reduced_costs[static_cast<std::size_t>(t.var)] -= sol.duals[i] * t.coeff;
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    if (!kept[i]) continue;
    bool defining = rows[i].rel == Relation::kEqual ||
                    !basic[static_cast<std::size_t>(slack_col[i])];
    if (!defining) continue;
    if (rows[i].user_row >= 0) {
      sol.defining_rows.push_back(rows[i].user_row);
    } else {
      sol.vars_at_upper.push_back(rows[i].upper_var);
    }
  }
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (vars[j].lower && !basic[static_cast<std::size_t>(col_of[j])]) {
      sol.vars_at_lower.push_back(static_cast<int>(j));
    }
  }
  std::sort(sol.defining_rows.begin(), sol.defining_rows.end());
  std::sort(sol.vars_at_upper.begin(), sol.vars_at_upper.end());
  for (std::size_t i = 0; i < urows.size(); ++i) {
    if (p.row_activity(i, sol.primal) == urows[i].rhs) sol.tight_rows.push_back(static_cast<int>(i));
  }
  return sol;
}

// ---------------------------------------------------------------------------
// Certificates

std::vector<std::string> check_certificates(const Problem& p, const Solution& s) {
  std::vector<std::string> bad;
  if (s.status != Status::kOptimal) {
    bad.push_back("status is " + to_string(s.status) + ", not optimal");
    return bad;
  }
  const auto& vars = p.variables();
  const auto& rows = p.constraints();
  if (s.primal.size() != vars.size() || s.duals.size() != rows.size()) {
    bad.push_back("solution dimensions do not match the problem");
    return bad;
  }
  // Minimisation view: for a max problem flip every dual sign condition.
  const int sense = p.sense() == Sense::kMinimize ? 1 : -1;

  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (vars[j].lower && s.primal[j] < *vars[j].lower) {
      bad.push_back("variable " + vars[j].name + " below its lower bound");
    }
    if (vars[j].upper && s.primal[j] > *vars[j].upper) {
      bad.push_back("variable " + vars[j].name + " above its upper bound");
    }
  }
  Rational dual_obj = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    Rational act = p.row_activity(i, s.primal);
    const std::string label = "row " + std::to_string(i) + (r.name.empty() ? "" : " (" + r.name + ")");
    bool ok = r.rel == Relation::kEqual ? act == r.rhs
              : r.rel == Relation::kLessEqual ? act <= r.rhs
                                              : act >= r.rhs;
    if (!ok) bad.push_back(label + " infeasible");
    const int ys = sgn(s.duals[i]) * sense;
    if (r.rel == Relation::kGreaterEqual && ys < 0) bad.push_back(label + " dual has wrong sign");
    if (r.rel == Relation::kLessEqual && ys > 0) bad.push_back(label + " dual has wrong sign");
    if (sgn(s.duals[i]) != 0 && act != r.rhs) {
      bad.push_back(label + " has a non-zero dual but is not tight");
    }
    dual_obj += s.duals[i] * r.rhs;
  }
  std::vector<Rational> d(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j) d[j] = vars[j].cost;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const Term& t : rows[i].terms) d[static_cast<std::size_t>(t.var)] -= s.duals[i] * t.coeff;
  }
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const int ds = sgn(d[j]) * sense;
    if (ds > 0) {
      if (!vars[j].lower || s.primal[j] != *vars[j].lower) {
        bad.push_back("variable " + vars[j].name + " has positive reduced cost off its lower bound");
      } else {
        dual_obj += d[j] * *vars[j].lower;
      }
    } else if (ds < 0) {
      if (!vars[j].upper || s.primal[j] != *vars[j].upper) {
        bad.push_back("variable " + vars[j].name + " has negative reduced cost off its upper bound");
      } else {
        dual_obj += d[j] * *vars[j].upper;
      }
    }
  }
  Rational primal_obj = p.objective_value(s.primal);
  if (primal_obj != s.objective) bad.push_back("reported objective differs from c^T x");
  if (primal_obj != dual_obj) {
    bad.push_back("duality gap: primal " + nbstab::to_string(primal_obj) + " vs dual " +
                  nbstab::to_string(dual_obj));
  }
  return bad;
}

}  // namespace nbstab::lp
