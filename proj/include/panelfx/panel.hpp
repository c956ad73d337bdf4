#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace panelfx {

// One entity x time cell. Variables are stored sparsely; an absent key means
// the value is missing for that cell.
struct Observation {
  std::string entity_id;
  std::int64_t time_id = 0;
  std::map<std::string, double> values;

  friend bool operator==(const Observation&, const Observation&) = default;
};

// Variables named like percentages are validated against [0, 100] on entry.
inline bool is_percent_variable(const std::string& name) {
  return name.find("share") != std::string::npos ||
         name.find("bounce") != std::string::npos;
}

inline const double* find_value(const Observation& row, const std::string& variable) {
  auto it = row.values.find(variable);
  return it == row.values.end() ? nullptr : &it->second;
}

// Canonical panel: entities and times sorted and de-duplicated, rows sorted by
// (entity_id, time_id), and group_index[i] holding the row positions of
// entities[i]. Construction is permutation-invariant, so two record sets with
// the same cells compare equal regardless of input order.
struct PanelDataset {
  std::vector<std::string> entities;
  std::vector<std::int64_t> times;
  std::vector<Observation> rows;
  std::vector<std::vector<std::size_t>> group_index;

  std::size_t n_rows() const { return rows.size(); }
  std::size_t n_entities() const { return entities.size(); }
  std::size_t n_times() const { return times.size(); }
  std::size_t group_size(std::size_t entity_pos) const { return group_index[entity_pos].size(); }

  std::optional<std::size_t> entity_pos(const std::string& id) const {
    auto it = std::lower_bound(entities.begin(), entities.end(), id);
    if (it == entities.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - entities.begin());
  }

  bool has_variable(const std::string& variable) const {
    for (const auto& row : rows)
      if (row.values.count(variable)) return true;
    return false;
  }

  friend bool operator==(const PanelDataset&, const PanelDataset&) = default;
};

inline void validate_cell_values(const Observation& row) {
  for (const auto& [name, value] : row.values) {
    if (!std::isfinite(value))
      raise(errc::non_finite_value,
            "variable '" + name + "' at (" + row.entity_id + ", " +
                std::to_string(row.time_id) + ") is not finite");
    if (is_percent_variable(name) && (value < 0.0 || value > 100.0))
      raise(errc::out_of_range,
            "variable '" + name + "' at (" + row.entity_id + ", " +
                std::to_string(row.time_id) + ") = " + std::to_string(value) +
                " outside [0, 100]");
  }
}

inline PanelDataset build_panel(std::vector<Observation> records) {
  for (const auto& row : records) validate_cell_values(row);

  std::sort(records.begin(), records.end(), [](const Observation& a, const Observation& b) {
    if (a.entity_id != b.entity_id) return a.entity_id < b.entity_id;
    return a.time_id < b.time_id;
  });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].entity_id == records[i - 1].entity_id &&
        records[i].time_id == records[i - 1].time_id)
      raise(errc::duplicate_cell, "(" + records[i].entity_id + ", " +
                                      std::to_string(records[i].time_id) +
                                      ") appears more than once");
  }

  PanelDataset panel;
  panel.rows = std::move(records);
  for (std::size_t i = 0; i < panel.rows.size(); ++i) {
    if (panel.entities.empty() || panel.entities.back() != panel.rows[i].entity_id) {
      panel.entities.push_back(panel.rows[i].entity_id);
      panel.group_index.emplace_back();
    }
    panel.group_index.back().push_back(i);
    panel.times.push_back(panel.rows[i].time_id);
  }
  std::sort(panel.times.begin(), panel.times.end());
  panel.times.erase(std::unique(panel.times.begin(), panel.times.end()), panel.times.end());
  return panel;
}

namespace detail {

// Shared precondition for the per-group operations: the variable must exist
// somewhere in the panel, and every entity must carry it at least once.
inline void require_variable_everywhere(const PanelDataset& panel, const std::string& variable) {
  if (!panel.has_variable(variable))
    raise(errc::unknown_variable, "no row carries variable '" + variable + "'");
  for (std::size_t i = 0; i < panel.n_entities(); ++i) {
    bool found = false;
    for (std::size_t r : panel.group_index[i])
      if (panel.rows[r].values.count(variable)) { found = true; break; }
    if (!found)
      raise(errc::empty_group, "entity '" + panel.entities[i] + "' has no value for '" +
                                   variable + "'");
  }
}

}  // namespace detail

// Per-entity means over the rows that carry the variable.
inline std::map<std::string, double> group_means(const PanelDataset& panel,
                                                 const std::string& variable) {
  detail::require_variable_everywhere(panel, variable);
  std::map<std::string, double> means;
  for (std::size_t i = 0; i < panel.n_entities(); ++i) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t r : panel.group_index[i]) {
      if (const double* v = find_value(panel.rows[r], variable)) {
        sum += *v;
        ++count;
      }
    }
    means.emplace(panel.entities[i], sum / static_cast<double>(count));
  }
  return means;
}

// Time-demeaned values aligned with panel.rows; nullopt where the cell is
// missing. Demeaning uses each entity's own mean, so adding a per-entity
// constant leaves the result unchanged.
inline std::vector<std::optional<double>> within_transform(const PanelDataset& panel,
                                                           const std::string& variable) {
  detail::require_variable_everywhere(panel, variable);
  std::vector<std::optional<double>> out(panel.n_rows());
  for (std::size_t i = 0; i < panel.n_entities(); ++i) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t r : panel.group_index[i]) {
      if (const double* v = find_value(panel.rows[r], variable)) {
        sum += *v;
        ++count;
      }
    }
    const double mean = sum / static_cast<double>(count);
    for (std::size_t r : panel.group_index[i]) {
      if (const double* v = find_value(panel.rows[r], variable)) out[r] = *v - mean;
    }
  }
  return out;
}

// entity -> group label (e.g. website domain -> product-category ticker).
struct CategoryMap {
  std::map<std::string, std::string> assignments;

  const std::string* find(const std::string& entity) const {
    auto it = assignments.find(entity);
    return it == assignments.end() ? nullptr : &it->second;
  }

  friend bool operator==(const CategoryMap&, const CategoryMap&) = default;
};

// Collapses entities into their mapped groups: for each (group, time) cell and
// each variable, the unweighted mean over member entities carrying a value at
// that time. Every panel entity must be mapped.
inline PanelDataset aggregate_by_category(const PanelDataset& panel, const CategoryMap& map) {
  for (const auto& entity : panel.entities)
    if (!map.find(entity))
      raise(errc::unmapped_entity, "entity '" + entity + "' has no category assignment");

  // (category, time, variable) -> running sum and count.
  std::map<std::string, std::map<std::int64_t, std::map<std::string, std::pair<double, std::size_t>>>>
      cells;
  for (const auto& row : panel.rows) {
    const std::string& category = *map.find(row.entity_id);
    auto& cell = cells[category][row.time_id];
    for (const auto& [name, value] : row.values) {
      auto& [sum, count] = cell[name];
      sum += value;
      ++count;
    }
  }

  std::vector<Observation> records;
  for (const auto& [category, by_time] : cells) {
    for (const auto& [time, vars] : by_time) {
      Observation row;
      row.entity_id = category;
      row.time_id = time;
      for (const auto& [name, acc] : vars)
        row.values[name] = acc.first / static_cast<double>(acc.second);
      records.push_back(std::move(row));
    }
  }
  return build_panel(std::move(records));
}

struct BalanceReport {
  std::size_t n_entities = 0;
  std::size_t n_times = 0;
  std::size_t n_rows = 0;
  std::int64_t time_min = 0;
  std::int64_t time_max = 0;
  std::size_t min_group_size = 0;
  std::size_t max_group_size = 0;
  double mean_group_size = 0.0;
  bool balanced = false;

  friend bool operator==(const BalanceReport&, const BalanceReport&) = default;
};

inline BalanceReport balance_report(const PanelDataset& panel) {
  BalanceReport report;
  report.n_entities = panel.n_entities();
  report.n_times = panel.n_times();
  report.n_rows = panel.n_rows();
  if (panel.n_rows() == 0) return report;
  report.time_min = panel.times.front();
  report.time_max = panel.times.back();
  report.min_group_size = panel.group_size(0);
  report.max_group_size = panel.group_size(0);
  for (std::size_t i = 0; i < panel.n_entities(); ++i) {
    report.min_group_size = std::min(report.min_group_size, panel.group_size(i));
    report.max_group_size = std::max(report.max_group_size, panel.group_size(i));
  }
  report.mean_group_size =
      static_cast<double>(panel.n_rows()) / static_cast<double>(panel.n_entities());
  report.balanced = report.min_group_size == report.max_group_size &&
                    report.min_group_size == panel.n_times();
  return report;
}

}  // namespace panelfx
