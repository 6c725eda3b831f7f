#include "lineup/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

#include "lineup/error.hpp"

namespace lineup {

std::string_view to_string(VariableKind kind) {
  return kind == VariableKind::continuous ? "continuous" : "categorical";
}

VariableKind parse_variable_kind(std::string_view text) {
  if (text == "continuous") return VariableKind::continuous;
  if (text == "categorical") return VariableKind::categorical;
  throw SchemaError(fmt::format("unknown variable kind '{}'", text));
}

Variable Variable::continuous(std::string name, std::vector<double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw PreconditionError(fmt::format(
          "variable '{}': non-finite value at row {}", name, i + 1));
    }
  }
  Variable v;
  v.name_ = std::move(name);
  v.kind_ = VariableKind::continuous;
  v.values_ = std::move(values);
  return v;
}

Variable Variable::categorical(std::string name,
                               const std::vector<std::string>& labels) {
  std::vector<std::string> levels;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::size_t> codes;
  codes.reserve(labels.size());
  for (const auto& label : labels) {
    auto [it, inserted] = index.try_emplace(label, levels.size());
    if (inserted) levels.push_back(label);
    codes.push_back(it->second);
  }
  return categorical(std::move(name), std::move(levels), std::move(codes));
}

Variable Variable::categorical(std::string name,
                               std::vector<std::string> levels,
                               std::vector<std::size_t> codes) {
  if (levels.empty()) {
    throw SchemaError(
        fmt::format("categorical variable '{}' has no levels", name));
  }
  std::set<std::string_view> seen;
  for (const auto& level : levels) {
    if (!seen.insert(level).second) {
      throw SchemaError(fmt::format(
          "categorical variable '{}' repeats level '{}'", name, level));
    }
  }
  for (auto code : codes) {
    if (code >= levels.size()) {
      throw SchemaError(
          fmt::format("categorical variable '{}': code {} out of range", name,
                      code));
    }
  }
  Variable v;
  v.name_ = std::move(name);
  v.kind_ = VariableKind::categorical;
  v.levels_ = std::move(levels);
  v.codes_ = std::move(codes);
  return v;
}

std::size_t Variable::size() const {
  return is_continuous() ? values_.size() : codes_.size();
}

std::span<const double> Variable::values() const {
  if (!is_continuous()) {
    throw SchemaError(fmt::format("variable '{}' is not continuous", name_));
  }
  return values_;
}

std::span<const std::string> Variable::levels() const {
  if (!is_categorical()) {
    throw SchemaError(fmt::format("variable '{}' is not categorical", name_));
  }
  return levels_;
}

std::span<const std::size_t> Variable::codes() const {
  if (!is_categorical()) {
    throw SchemaError(fmt::format("variable '{}' is not categorical", name_));
  }
  return codes_;
}

const std::string& Variable::label(std::size_t row) const {
  const auto c = codes();
  if (row >= c.size()) {
    throw PreconditionError(fmt::format("variable '{}': row {} out of range", name_, row));
  }
  return levels_[c[row]];
}

Variable Variable::with_values(std::vector<double> values) const {
  if (!is_continuous()) {
    throw SchemaError(fmt::format("variable '{}' is not continuous", name_));
  }
  if (values.size() != values_.size()) {
    throw PreconditionError(
        fmt::format("variable '{}': replacement has wrong length", name_));
  }
  return continuous(name_, std::move(values));
}

Variable Variable::with_codes(std::vector<std::size_t> codes) const {
  if (!is_categorical()) {
    throw SchemaError(fmt::format("variable '{}' is not categorical", name_));
  }
  if (codes.size() != codes_.size()) {
    throw PreconditionError(
        fmt::format("variable '{}': replacement has wrong length", name_));
  }
  return categorical(name_, levels_, std::move(codes));
}

Dataset::Dataset(std::vector<Variable> variables)
    : variables_(std::move(variables)) {
  if (variables_.empty()) {
    throw SchemaError("dataset has no variables");
  }
  rows_ = variables_.front().size();
  if (rows_ == 0) {
    throw PreconditionError("dataset has no rows");
  }
  std::set<std::string_view> names;
  for (const auto& v : variables_) {
    if (!names.insert(v.name()).second) {
      throw SchemaError(fmt::format("duplicate variable name '{}'", v.name()));
    }
    if (v.size() != rows_) {
      throw SchemaError(fmt::format(
          "variable '{}' has {} rows, expected {}", v.name(), v.size(), rows_));
    }
  }
}

const Variable* Dataset::find(std::string_view name) const {
  auto it = std::find_if(variables_.begin(), variables_.end(),
                         [&](const Variable& v) { return v.name() == name; });
  return it == variables_.end() ? nullptr : &*it;
}

const Variable& Dataset::at(std::string_view name) const {
  if (const auto* v = find(name)) return *v;
  throw SchemaError(fmt::format("unknown variable '{}'", name));
}

Dataset Dataset::with_variable(Variable replacement) const {
  std::vector<Variable> copy = variables_;
  auto it = std::find_if(copy.begin(), copy.end(), [&](const Variable& v) {
    return v.name() == replacement.name();
  });
  if (it == copy.end()) {
    throw SchemaError(fmt::format("unknown variable '{}'", replacement.name()));
  }
  if (it->kind() != replacement.kind()) {
    throw SchemaError(fmt::format("variable '{}' changes kind on replacement",
                                  replacement.name()));
  }
  *it = std::move(replacement);
  return Dataset(std::move(copy));
}

bool same_structure(const Dataset& a, const Dataset& b) {
  if (a.rows() != b.rows() || a.columns() != b.columns()) return false;
  for (std::size_t i = 0; i < a.columns(); ++i) {
    const auto& va = a.variables()[i];
    const auto& vb = b.variables()[i];
    if (va.name() != vb.name() || va.kind() != vb.kind()) return false;
  }
  return true;
}

const ColumnSpec* Schema::find(std::string_view name) const {
  auto it = std::find_if(columns.begin(), columns.end(),
                         [&](const ColumnSpec& c) { return c.name == name; });
  return it == columns.end() ? nullptr : &*it;
}

}  // namespace lineup
