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

#ifndef NBSTAB_LP_HPP
#define NBSTAB_LP_HPP

#include <optional>
#include <string>
#include <vector>

#include "nbstab/rational.hpp"

namespace nbstab::lp {

enum class Sense { kMinimize, kMaximize };
enum class Relation { kLessEqual, kEqual, kGreaterEqual };
enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Term {
  int var = 0;
  Rational coeff;
};

struct Constraint {
  std::vector<Term> terms;
  Relation rel = Relation::kGreaterEqual;
  Rational rhs;
  std::string name;
};

struct Variable {
  std::string name;
  std::optional<Rational> lower = Rational(0);  // nullopt: unbounded below
  std::optional<Rational> upper;                // nullopt: unbounded above
  Rational cost;
};

/// Linear program over exact rationals. Variables default to x >= 0.
class Problem {
 public:
  explicit Problem(Sense sense = Sense::kMinimize) : sense_(sense) {}

  int add_variable(std::string name, Rational cost = 0,
                   std::optional<Rational> lower = Rational(0),
                   std::optional<Rational> upper = std::nullopt);
  int add_constraint(std::vector<Term> terms, Relation rel, Rational rhs,
                     std::string name = {});

  void set_sense(Sense s) { sense_ = s; }
  void set_cost(int var, Rational c) { vars_[static_cast<std::size_t>(var)].cost = std::move(c); }

  Sense sense() const { return sense_; }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return rows_; }
  std::size_t num_variables() const { return vars_.size(); }
  std::size_t num_constraints() const { return rows_.size(); }

  Rational row_activity(std::size_t row, const std::vector<Rational>& x) const;
  Rational objective_value(const std::vector<Rational>& x) const;

  /// Human-readable, deterministic dump for debugging.
  std::string dump() const;

 private:
  Sense sense_;
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
};

struct Solution {
  Status status = Status::kInfeasible;
  std::vector<Rational> primal;
  Rational objective;
  // Row duals y and reduced costs d with c = A^T y + d.
  std::vector<Rational> duals;
  std::vector<Rational> reduced_costs;
  // Equations of the basis-defining system: constraint rows whose slack is
  // nonbasic, plus variables pinned at a bound. Together they have full
  // column rank and determine `primal` uniquely.
  std::vector<int> defining_rows;
  std::vector<int> vars_at_lower;
  std::vector<int> vars_at_upper;
  std::vector<int> tight_rows;  // every row satisfied with equality
  std::vector<Rational> farkas;  // infeasible only: phase-1 dual ray
  int pivots = 0;
};

/// Two-phase primal simplex on a dense rational tableau with Bland's rule.
/// Optimal results are basic solutions with complementary duals.
Solution solve(const Problem& p);

/// Exact feasibility, dual feasibility, complementary slackness and strong
/// duality check. Returns human-readable violations; empty means certified.
std::vector<std::string> check_certificates(const Problem& p, const Solution& s);

std::string to_string(Status s);

}  // namespace nbstab::lp

#endif  // NBSTAB_LP_HPP
