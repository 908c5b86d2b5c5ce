#ifndef SOLROB_MILP_MODEL_HPP
#define SOLROB_MILP_MODEL_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "solrob/error.hpp"
#include "solrob/rational.hpp"

namespace solrob::milp {

using VarId = std::size_t;

enum class VarType { Continuous, Integer, Binary };
enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Sense { Minimize, Maximize };

struct Variable {
  std::string name;
  std::optional<Rational> lower;  // nullopt: -infinity
  std::optional<Rational> upper;  // nullopt: +infinity
  VarType type = VarType::Continuous;

  bool is_integral() const { return type != VarType::Continuous; }
};

struct Term {
  VarId var;
  Rational coef;
};

/// Sparse linear expression with a constant term.
class LinearExpr {
 public:
  LinearExpr() = default;
  LinearExpr(Rational constant) : constant_(std::move(constant)) {}  // NOLINT(implicit)

  LinearExpr& add(VarId var, const Rational& coef) {
    if (coef != 0) terms_.push_back({var, coef});
    return *this;
  }
  LinearExpr& add(const LinearExpr& other, const Rational& scale = 1) {
    for (const auto& t : other.terms_) add(t.var, t.coef * scale);
    constant_ += other.constant_ * scale;
    return *this;
  }
  LinearExpr& add_constant(const Rational& c) {
    constant_ += c;
    return *this;
  }

  const std::vector<Term>& terms() const { return terms_; }
  const Rational& constant() const { return constant_; }

  /// Coefficients of repeated variables summed; zero terms dropped; sorted by id.
  std::vector<Term> merged() const {
    std::map<VarId, Rational> acc;
    for (const auto& t : terms_) acc[t.var] += t.coef;
    std::vector<Term> out;
    for (auto& [v, c] : acc)
      if (c != 0) out.push_back({v, c});
    return out;
  }

 private:
  std::vector<Term> terms_;
  Rational constant_ = 0;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Relation relation = Relation::LessEqual;
  Rational rhs;
};

struct Objective {
  Sense sense = Sense::Minimize;
  std::vector<Term> terms;
  Rational constant = 0;
};

/// Linear model with optional integrality on each variable.
class MilpModel {
 public:
  VarId add_variable(std::string name, std::optional<Rational> lower, std::optional<Rational> upper,
                     VarType type) {
    if (type == VarType::Binary) {
      lower = std::max(lower.value_or(Rational(0)), Rational(0));
      upper = std::min(upper.value_or(Rational(1)), Rational(1));
    }
    if (index_.count(name)) throw StructuralError("duplicate variable name '" + name + "'");
    if (lower && upper && *lower > *upper)
      throw StructuralError("variable '" + name + "' has empty bounds");
    const VarId id = variables_.size();
    index_.emplace(name, id);
    variables_.push_back({std::move(name), std::move(lower), std::move(upper), type});
    return id;
  }

  VarId add_binary(std::string name) { return add_variable(std::move(name), Rational(0), Rational(1), VarType::Binary); }

  VarId add_integer(std::string name, Rational lower, std::optional<Rational> upper) {
    return add_variable(std::move(name), std::move(lower), std::move(upper), VarType::Integer);
  }

  VarId add_continuous(std::string name, std::optional<Rational> lower, std::optional<Rational> upper) {
    return add_variable(std::move(name), std::move(lower), std::move(upper), VarType::Continuous);
  }

  /// Adds `expr relation rhs`; the expression constant moves to the right side.
  std::size_t add_constraint(std::string name, const LinearExpr& expr, Relation relation, const Rational& rhs) {
    for (const auto& t : expr.terms())
      if (t.var >= variables_.size())
        throw StructuralError("constraint '" + name + "' references an undeclared variable");
    constraints_.push_back({std::move(name), expr.merged(), relation, rhs - expr.constant()});
    return constraints_.size() - 1;
  }

  void set_objective(Sense sense, const LinearExpr& expr) {
    for (const auto& t : expr.terms())
      if (t.var >= variables_.size()) throw StructuralError("objective references an undeclared variable");
    objective_ = {sense, expr.merged(), expr.constant()};
  }

  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(VarId v) const { return variables_.at(v); }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Objective& objective() const { return objective_; }
  std::size_t variable_count() const { return variables_.size(); }

  std::optional<VarId> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Same model with every integrality requirement dropped.
  MilpModel relaxed() const {
    MilpModel copy = *this;
    for (auto& v : copy.variables_) v.type = VarType::Continuous;
    return copy;
  }

  void set_bounds(VarId v, std::optional<Rational> lower, std::optional<Rational> upper) {
    variables_.at(v).lower = std::move(lower);
    variables_.at(v).upper = std::move(upper);
  }

  /// Known feasible assignment; solvers may use it as a first incumbent.
  void set_start(std::vector<Rational> x) { start_ = std::move(x); }
  const std::vector<Rational>& start() const { return start_; }

  /// Branching preference; fractional variables of the highest priority are
  /// branched on first. Default 0.
  void set_priority(VarId v, int priority) {
    if (v >= variables_.size()) throw StructuralError("priority for an undeclared variable");
    if (priority_.size() < variables_.size()) priority_.resize(variables_.size(), 0);
    priority_[v] = priority;
  }
  int priority(VarId v) const { return v < priority_.size() ? priority_[v] : 0; }

 private:
  std::vector<Variable> variables_;
  std::vector<Rational> start_;
  std::vector<int> priority_;
  std::vector<Constraint> constraints_;
  Objective objective_;
  std::unordered_map<std::string, VarId> index_;
};

inline Rational evaluate(const std::vector<Term>& terms, const std::vector<Rational>& x) {
  Rational total = 0;
  for (const auto& t : terms) total += t.coef * x.at(t.var);
  return total;
}

inline Rational evaluate_objective(const MilpModel& model, const std::vector<Rational>& x) {
  return evaluate(model.objective().terms, x) + model.objective().constant;
}

/// Exact check of an assignment against bounds, integrality and constraints.
/// Each returned string names one violation; empty means feasible.
inline std::vector<std::string> verify_assignment(const MilpModel& model, const std::vector<Rational>& x,
                                                  const Rational& tolerance = Rational(1, 1000000000)) {
  std::vector<std::string> problems;
  if (x.size() != model.variable_count()) {
    problems.push_back("assignment has wrong size");
    return problems;
  }
  for (VarId v = 0; v < x.size(); ++v) {
    const auto& var = model.variable(v);
    if (var.lower && x[v] < *var.lower - tolerance) problems.push_back(var.name + " below lower bound");
    if (var.upper && x[v] > *var.upper + tolerance) problems.push_back(var.name + " above upper bound");
    if (var.is_integral() && !is_integer(x[v])) problems.push_back(var.name + " is not integral");
  }
  for (const auto& c : model.constraints()) {
    const Rational lhs = evaluate(c.terms, x);
    bool ok = true;
    switch (c.relation) {
      case Relation::LessEqual: ok = lhs <= c.rhs + tolerance; break;
      case Relation::GreaterEqual: ok = lhs >= c.rhs - tolerance; break;
      case Relation::Equal: ok = lhs <= c.rhs + tolerance && lhs >= c.rhs - tolerance; break;
    }
    if (!ok) problems.push_back("constraint " + c.name + " violated (lhs " + lhs.str() + ", rhs " + c.rhs.str() + ")");
  }
  return problems;
}

enum class Status { Optimal, Infeasible, Unbounded, BudgetExceeded };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "Optimal";
    case Status::Infeasible: return "Infeasible";
    case Status::Unbounded: return "Unbounded";
    case Status::BudgetExceeded: return "BudgetExceeded";
  }
  return "?";
}

struct SolveStats {
  std::size_t nodes = 0;
  std::size_t lp_iterations = 0;
  double elapsed_seconds = 0;
  bool depth_first_fallback = false;
};

struct MilpResult {
  Status status = Status::Infeasible;
  std::vector<Rational> assignment;  // empty when no solution is known
  Rational objective = 0;
  std::optional<Rational> best_bound;
  SolveStats stats;

  bool has_solution() const { return !assignment.empty(); }
  const Rational& value(VarId v) const { return assignment.at(v); }
  std::int64_t int_value(VarId v) const { return to_int64(assignment.at(v)); }
};

}  // namespace solrob::milp

#endif  // SOLROB_MILP_MODEL_HPP
