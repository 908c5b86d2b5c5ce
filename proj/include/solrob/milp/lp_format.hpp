#ifndef SOLROB_MILP_LP_FORMAT_HPP
#define SOLROB_MILP_LP_FORMAT_HPP

// Writes a MilpModel in the CPLEX-style LP text format read by most solvers:
//
//   file     := header* sense objective "Subject To" row* "Bounds" bound* section* "End"
//   header   := "\" text                       comment line
//   sense    := "Minimize" | "Maximize"
//   objective:= " obj:" terms                  constant kept in a "\ constant" comment
//   row      := " " name ":" terms rel number  rel in {<=, =, >=}
//   bound    := " " lo "<=" var "<=" hi | " " var "free" | " -inf <= " var "<=" hi | ...
//   section  := "General" var* | "Binary" var*
//   terms    := ("+"|"-") number var ...
//
// Numbers are integers when exact and otherwise 17 significant digits.

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include "solrob/milp/model.hpp"

namespace solrob::milp {

namespace detail {

inline std::string lp_number(const Rational& r) {
  if (is_integer(r)) return solrob::to_string(r);
  std::ostringstream os;
  os << std::setprecision(17) << to_double(r);
  return os.str();
}

inline void lp_terms(std::ostream& os, const MilpModel& model, const std::vector<Term>& terms) {
  if (terms.empty()) {
    os << " 0 " << (model.variable_count() ? model.variable(0).name : "x");
    return;
  }
  for (const auto& t : terms) {
    os << (t.coef < 0 ? " - " : " + ");
    const Rational mag = t.coef < 0 ? Rational(-t.coef) : t.coef;
    if (mag != 1) os << lp_number(mag) << " ";
    os << model.variable(t.var).name;
  }
}

}  // namespace detail

inline void write_lp(std::ostream& os, const MilpModel& model, const std::string& title = {}) {
  if (!title.empty()) os << "\\ " << title << "\n";
  const auto& obj = model.objective();
  if (obj.constant != 0) os << "\\ constant " << detail::lp_number(obj.constant) << "\n";
  os << (obj.sense == Sense::Minimize ? "Minimize" : "Maximize") << "\n obj:";
  detail::lp_terms(os, model, obj.terms);
  os << "\nSubject To\n";
  std::size_t row = 0;
  for (const auto& c : model.constraints()) {
    os << " " << (c.name.empty() ? "r" + std::to_string(row) : c.name) << ":";
    detail::lp_terms(os, model, c.terms);
    switch (c.relation) {
      case Relation::LessEqual: os << " <= "; break;
      case Relation::Equal: os << " = "; break;
      case Relation::GreaterEqual: os << " >= "; break;
    }
    os << detail::lp_number(c.rhs) << "\n";
    ++row;
  }
  os << "Bounds\n";
  for (const auto& v : model.variables()) {
    if (v.type == VarType::Binary) continue;
    if (!v.lower && !v.upper) {
      os << " " << v.name << " free\n";
      continue;
    }
    os << " " << (v.lower ? detail::lp_number(*v.lower) : "-inf") << " <= " << v.name << " <= "
       << (v.upper ? detail::lp_number(*v.upper) : "+inf") << "\n";
  }
  bool any = false;
  for (const auto& v : model.variables())
    if (v.type == VarType::Integer) {
      if (!any) os << "General\n";
      any = true;
      os << " " << v.name << "\n";
    }
  any = false;
  for (const auto& v : model.variables())
    if (v.type == VarType::Binary) {
      if (!any) os << "Binary\n";
      any = true;
      os << " " << v.name << "\n";
    }
  os << "End\n";
}

inline std::string to_lp_string(const MilpModel& model, const std::string& title = {}) {
  std::ostringstream os;
  write_lp(os, model, title);
  return os.str();
}

}  // namespace solrob::milp

#endif  // SOLROB_MILP_LP_FORMAT_HPP
