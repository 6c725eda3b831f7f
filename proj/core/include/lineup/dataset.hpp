#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lineup {

enum class VariableKind { continuous, categorical };

std::string_view to_string(VariableKind kind);
VariableKind parse_variable_kind(std::string_view text);

// One named column. Continuous columns hold finite doubles; categorical
// columns hold codes into an explicit, ordered list of levels.
class Variable {
 public:
  static Variable continuous(std::string name, std::vector<double> values);

  // Levels are the distinct labels in order of first appearance.
  static Variable categorical(std::string name,
                              const std::vector<std::string>& labels);

  static Variable categorical(std::string name,
                              std::vector<std::string> levels,
                              std::vector<std::size_t> codes);

  const std::string& name() const { return name_; }
  VariableKind kind() const { return kind_; }
  bool is_continuous() const { return kind_ == VariableKind::continuous; }
  bool is_categorical() const { return kind_ == VariableKind::categorical; }
  std::size_t size() const;

  // Throws SchemaError when called on the wrong kind.
  std::span<const double> values() const;
  std::span<const std::string> levels() const;
  std::span<const std::size_t> codes() const;
  const std::string& label(std::size_t row) const;

  // Copies with the data replaced; name, kind and levels are kept.
  Variable with_values(std::vector<double> values) const;
  Variable with_codes(std::vector<std::size_t> codes) const;

  friend bool operator==(const Variable&, const Variable&) = default;

 private:
  Variable() = default;

  std::string name_;
  VariableKind kind_ = VariableKind::continuous;
  std::vector<double> values_;
  std::vector<std::string> levels_;
  std::vector<std::size_t> codes_;
};

// Immutable table of equally long, uniquely named variables with n >= 1.
class Dataset {
 public:
  explicit Dataset(std::vector<Variable> variables);

  std::size_t rows() const { return rows_; }
  std::size_t columns() const { return variables_.size(); }
  std::span<const Variable> variables() const { return variables_; }

  const Variable* find(std::string_view name) const;
  // Throws SchemaError for unknown names.
  const Variable& at(std::string_view name) const;
  const Variable& operator[](std::string_view name) const { return at(name); }

  // Copy with the same-named variable replaced.
  Dataset with_variable(Variable replacement) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<Variable> variables_;
  std::size_t rows_ = 0;
};

// Same variable names (in order), kinds and row count.
bool same_structure(const Dataset& a, const Dataset& b);

struct ColumnSpec {
  std::string name;
  VariableKind kind = VariableKind::continuous;
};

struct Schema {
  std::vector<ColumnSpec> columns;

  const ColumnSpec* find(std::string_view name) const;
};

// Sidecar format: {"columns": [{"name": str, "kind": "continuous"|"categorical"}]}
Schema parse_schema(std::string_view json_text);
Schema load_schema(const std::filesystem::path& path);
std::string format_schema(const Schema& schema);

// CSV with a header row. Column order follows the file; every header must
// be declared in the schema and every schema column must be present.
Dataset parse_dataset_csv(std::string_view text, const Schema& schema);
Dataset load_dataset(const std::filesystem::path& path, const Schema& schema);

std::string format_dataset_csv(const Dataset& data);
void save_dataset(const Dataset& data, const std::filesystem::path& path);

// Shortest decimal text that parses back to the same double.
std::string format_real(double value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace lineup
