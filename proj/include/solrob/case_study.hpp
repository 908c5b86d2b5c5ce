#ifndef SOLROB_CASE_STUDY_HPP
#define SOLROB_CASE_STUDY_HPP

// Comparison tables for the line planning approaches, rendered as aligned
// text or comma-separated values.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "solrob/lop.hpp"

namespace solrob::lop {

struct Cell {
  std::string value;
  std::string change;  // relative change to the block's reference row, or empty
};

struct TableRow {
  std::string label;
  std::vector<Cell> cells;
};

struct TableBlock {
  std::size_t scenarios = 0;
  std::vector<TableRow> rows;
};

struct Table {
  std::string label_column = "Method";
  std::vector<std::string> columns;
  std::vector<TableBlock> blocks;
  bool budget_exceeded = false;
};

/// "+52%", "-2%", "<1%" for small nonzero changes, empty when equal or when
/// the reference is zero.
inline std::string relative_change(const Rational& value, const Rational& reference) {
  if (value == reference || reference == 0) return {};
  const double pct = to_double((value - reference) * 100 / reference);
  if (std::fabs(pct) < 0.5) return pct > 0 ? "+<1%" : "-<1%";
  const long long rounded = std::llround(pct);
  return (rounded > 0 ? "+" : "") + std::to_string(rounded) + "%";
}

inline std::string render_text(const Table& t) {
  std::vector<std::vector<std::string>> grid;
  grid.push_back({"|S|", t.label_column});
  for (const auto& c : t.columns) grid.back().push_back(c);
  std::vector<std::size_t> separators;
  for (const auto& block : t.blocks) {
    separators.push_back(grid.size());
    for (std::size_t r = 0; r < block.rows.size(); ++r) {
      std::vector<std::string> line{r == 0 ? std::to_string(block.scenarios) : "", block.rows[r].label};
      for (const auto& cell : block.rows[r].cells)
        line.push_back(cell.change.empty() ? cell.value : cell.value + " (" + cell.change + ")");
      grid.push_back(std::move(line));
    }
  }
  std::vector<std::size_t> width(grid[0].size(), 0);
  for (const auto& line : grid)
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  std::size_t total = 0;
  for (auto w : width) total += w + 2;
  const std::string rule(total - 2, '-');
  std::ostringstream os;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::find(separators.begin(), separators.end(), i) != separators.end()) os << rule << "\n";
    std::string line;
    for (std::size_t c = 0; c < grid[i].size(); ++c) {
      const std::string& s = grid[i][c];
      // Labels left-aligned, numbers right-aligned.
      const std::string pad(width[c] - s.size(), ' ');
      line += c < 2 ? s + pad : pad + s;
      if (c + 1 < grid[i].size()) line += "  ";
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << "\n";
  }
  os << rule << "\n";
  return os.str();
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

inline std::string render_csv(const Table& t) {
  std::ostringstream os;
  os << "scenarios," << csv_field(t.label_column);
  for (const auto& c : t.columns) os << "," << csv_field(c) << "," << csv_field(c + " change");
  os << "\n";
  for (const auto& block : t.blocks)
    for (const auto& row : block.rows) {
      os << block.scenarios << "," << csv_field(row.label);
      for (const auto& cell : row.cells) os << "," << csv_field(cell.value) << "," << csv_field(cell.change);
      os << "\n";
    }
  return os.str();
}

// ---------------------------------------------------------------------------

inline Instance first_scenarios(const Instance& inst, std::size_t count) {
  if (count > inst.scenarios.size())
    throw ConfigError("requested " + std::to_string(count) + " scenarios, the instance has " +
                      std::to_string(inst.scenarios.size()));
  Instance out = inst;
  out.scenarios.resize(count);
  return out;
}

inline std::string percent_label(const Rational& eps) {
  std::ostringstream os;
  os << to_double(eps * 100) << "%";
  return os.str();
}

inline std::string plan_string(const Solution& s, Basis basis) {
  std::string out;
  for (auto v : basis_values(s, basis)) out += (out.empty() ? "" : " ") + std::to_string(v);
  return out;
}

namespace detail {

struct MetricRow {
  std::string label;
  bool ok = false;
  std::string marker;  // status when not optimal
  Metrics metrics;
};

inline MetricRow metric_row(const std::string& label, const Run& run) {
  MetricRow row{label, run.has_solution, {}, run.metrics};
  if (run.status != RobustStatus::Optimal) row.marker = to_string(run.status);
  return row;
}

/// Three metric columns; references are row indices for NO/distance and for
/// the anchored count.
inline TableBlock metric_block(std::size_t scenarios, const std::vector<MetricRow>& rows, std::size_t ref_cost,
                               std::size_t ref_anchor) {
  TableBlock block{scenarios, {}};
  for (const auto& r : rows) {
    TableRow out{r.marker.empty() ? r.label : r.label + " [" + r.marker + "]", {}};
    if (!r.ok) {
      out.cells = {{"-", ""}, {"-", ""}, {"-", ""}};
    } else {
      const auto& base = rows[ref_cost];
      const auto& anch = rows[ref_anchor];
      auto change = [&](const MetricRow& ref, const Rational& v, const Rational& rv) {
        return ref.ok && &ref != &r ? relative_change(v, rv) : std::string();
      };
      out.cells.push_back({r.metrics.nominal_objective.str(),
                           change(base, r.metrics.nominal_objective, base.metrics.nominal_objective)});
      out.cells.push_back({std::to_string(r.metrics.distance),
                           change(base, r.metrics.distance, base.metrics.distance)});
      out.cells.push_back({std::to_string(r.metrics.anchored),
                           change(anch, Rational(r.metrics.anchored), Rational(anch.metrics.anchored))});
    }
    block.rows.push_back(std::move(out));
  }
  return block;
}

inline std::vector<std::string> metric_columns(Basis basis) {
  return {"NO", basis == Basis::Frequencies ? "Frequency differences" : "Deployment differences", "Anchored lines"};
}

}  // namespace detail

/// Approaches side by side for each scenario prefix. Changes are relative to
/// the proactive row (NO, distance) and the anchored row (anchored count).
inline Table compare_table(const Instance& inst, const std::vector<std::size_t>& counts,
                           const std::vector<ApproachSpec>& approaches, const milp::Backend& backend,
                           const milp::SolveBudget& budget) {
  const Rational c_star = solve_nominal(inst, backend, budget).first;
  Table t;
  t.columns = detail::metric_columns(approaches.empty() ? Basis::Frequencies : approaches[0].basis);
  for (std::size_t count : counts) {
    const Instance sub = first_scenarios(inst, count);
    std::vector<detail::MetricRow> rows;
    std::size_t ref_cost = 0, ref_anchor = 0;
    bool seen_pro = false, seen_anc = false;
    for (const auto& spec : approaches) {
      const Run run = solve_lop(sub, spec, spec.approach == Approach::KDistance ? std::nullopt : std::optional(c_star),
                                backend, budget);
      t.budget_exceeded = t.budget_exceeded || run.status == RobustStatus::BudgetExceeded;
      if (spec.approach == Approach::Proactive && !seen_pro) {
        ref_cost = rows.size();
        seen_pro = true;
      }
      if (spec.approach == Approach::Anchored && !seen_anc) {
        ref_anchor = rows.size();
        seen_anc = true;
      }
      rows.push_back(detail::metric_row(spec.label(), run));
    }
    t.blocks.push_back(detail::metric_block(count, rows, ref_cost, ref_anchor));
  }
  return t;
}

/// Proactive approach with a relaxed anchor; changes relative to the first
/// epsilon.
inline Table epsilon_table(const Instance& inst, const std::vector<std::size_t>& counts,
                           const std::vector<Rational>& epsilons, Basis basis, const milp::Backend& backend,
                           const milp::SolveBudget& budget) {
  const Rational c_star = solve_nominal(inst, backend, budget).first;
  Table t;
  t.label_column = "Epsilon";
  t.columns = detail::metric_columns(basis);
  for (std::size_t count : counts) {
    const Instance sub = first_scenarios(inst, count);
    std::vector<detail::MetricRow> rows;
    for (const auto& eps : epsilons) {
      const Run run = solve_lop(sub, {Approach::Proactive, basis, eps, 0}, c_star, backend, budget);
      t.budget_exceeded = t.budget_exceeded || run.status == RobustStatus::BudgetExceeded;
      rows.push_back(detail::metric_row(percent_label(eps), run));
    }
    t.blocks.push_back(detail::metric_block(count, rows, 0, 0));
  }
  return t;
}

/// Summed reactive repair cost from the proactive nominal and from diverse
/// nominal optima, relative to the proactive objective.
inline Table reactive_table(const Instance& inst, const std::vector<std::size_t>& counts, std::size_t nominals,
                            Basis basis, const milp::Backend& backend, const milp::SolveBudget& budget) {
  const Rational c_star = solve_nominal(inst, backend, budget).first;
  const auto picks = generate_diverse_nominals(inst, c_star, nominals, basis, backend, budget);
  Table t;
  t.label_column = "Solution";
  t.columns = {basis == Basis::Frequencies ? "Frequency differences" : "Deployment differences"};
  for (std::size_t count : counts) {
    const Instance sub = first_scenarios(inst, count);
    TableBlock block{count, {}};
    const Run pro = solve_lop(sub, {Approach::Proactive, basis, 0, 0}, c_star, backend, budget);
    t.budget_exceeded = t.budget_exceeded || pro.status == RobustStatus::BudgetExceeded;
    const bool pro_ok = pro.status == RobustStatus::Optimal;
    block.rows.push_back({pro_ok ? "Proactive" : std::string("Proactive [") + to_string(pro.status) + "]",
                          {{pro.has_solution ? std::to_string(pro.metrics.distance) : "-", ""}}});
    for (std::size_t q = 0; q < picks.size(); ++q) {
      std::int64_t total = 0;
      std::string marker;
      for (const auto& sc : sub.scenarios) {
        const auto r = solve_reactive(sub, sc.od, picks[q].solution, basis, backend, budget);
        if (r.status != RobustStatus::Optimal) marker = to_string(r.status);
        t.budget_exceeded = t.budget_exceeded || r.status == RobustStatus::BudgetExceeded;
        total += r.cost;
      }
      std::string label = "Reactive ";
      label += q < 26 ? std::string(1, static_cast<char>('A' + q)) : std::to_string(q + 1);
      if (!marker.empty()) label += " [" + marker + "]";
      const std::string change =
          pro.has_solution && marker.empty() ? relative_change(Rational(total), Rational(pro.metrics.distance)) : "";
      block.rows.push_back({label, {{marker.empty() ? std::to_string(total) : "-", change}}});
    }
    t.blocks.push_back(std::move(block));
  }
  return t;
}

/// The diverse nominal optima themselves.
inline Table diverse_table(const Instance& inst, std::size_t count, Basis basis, const milp::Backend& backend,
                           const milp::SolveBudget& budget) {
  const Rational c_star = solve_nominal(inst, backend, budget).first;
  const auto picks = generate_diverse_nominals(inst, c_star, count, basis, backend, budget);
  Table t;
  t.label_column = "Solution";
  t.columns = {"NO", "Distance to earlier", basis == Basis::Frequencies ? "Frequencies" : "Deployment"};
  TableBlock block{inst.scenarios.size(), {}};
  for (std::size_t q = 0; q < picks.size(); ++q) {
    const std::string label = q < 26 ? std::string(1, static_cast<char>('A' + q)) : std::to_string(q + 1);
    block.rows.push_back({label,
                          {{nominal_objective(inst, picks[q].solution).str(), ""},
                           {q == 0 ? "-" : std::to_string(picks[q].min_distance), ""},
                           {plan_string(picks[q].solution, basis), ""}}});
  }
  t.blocks.push_back(std::move(block));
  return t;
}

}  // namespace solrob::lop

#endif  // SOLROB_CASE_STUDY_HPP
