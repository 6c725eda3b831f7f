#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "lineup/dataset.hpp"
#include "lineup/error.hpp"

namespace lineup {
namespace {

using json = nlohmann::json;

// RFC 4180 records: quoted fields may contain separators, quotes ("") and
// newlines. Returns one vector of fields per record, skipping blank lines.
std::vector<std::vector<std::string>> split_records(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;

  auto end_record = [&] {
    if (field_started || !fields.empty()) {
      fields.push_back(std::move(field));
      records.push_back(std::move(fields));
    }
    fields.clear();
    field.clear();
    field_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) {
          throw ParseError(
              fmt::format("line {}: stray quote inside unquoted field", line));
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        fields.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) {
    throw ParseError("unterminated quoted field");
  }
  end_record();
  return records;
}

double parse_real(const std::string& text, std::string_view column,
                  std::size_t row) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw ParseError(fmt::format("row {}, column '{}': '{}' is not a number",
                                 row, column, text));
  }
  if (!std::isfinite(value)) {
    throw ParseError(fmt::format(
        "row {}, column '{}': non-finite value '{}'", row, column, text));
  }
  return value;
}

std::string quote_field(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

Schema parse_schema(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("schema: {}", e.what()));
  }
  if (!doc.is_object() || !doc.contains("columns") ||
      !doc["columns"].is_array()) {
    throw SchemaError("schema: expected an object with a 'columns' array");
  }
  Schema schema;
  for (const auto& col : doc["columns"]) {
    if (!col.is_object() || !col.contains("name") || !col.contains("kind") ||
        !col["name"].is_string() || !col["kind"].is_string()) {
      throw SchemaError("schema: each column needs string 'name' and 'kind'");
    }
    ColumnSpec spec{col["name"].get<std::string>(),
                    parse_variable_kind(col["kind"].get<std::string>())};
    if (schema.find(spec.name)) {
      throw SchemaError(
          fmt::format("schema: column '{}' declared twice", spec.name));
    }
    schema.columns.push_back(std::move(spec));
  }
  if (schema.columns.empty()) {
    throw SchemaError("schema: no columns declared");
  }
  return schema;
}

Schema load_schema(const std::filesystem::path& path) {
  return parse_schema(read_text_file(path));
}

std::string format_schema(const Schema& schema) {
  json cols = json::array();
  for (const auto& c : schema.columns) {
    cols.push_back({{"name", c.name}, {"kind", std::string(to_string(c.kind))}});
  }
  return json{{"columns", cols}}.dump(2) + "\n";
}

Dataset parse_dataset_csv(std::string_view text, const Schema& schema) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") {
    text.remove_prefix(3);
  }
  auto records = split_records(text);
  if (records.empty()) {
    throw ParseError("empty file");
  }
  const auto& header = records.front();
  for (const auto& name : header) {
    if (!schema.find(name)) {
      throw SchemaError(fmt::format("column '{}' is not in the schema", name));
    }
  }
  for (const auto& spec : schema.columns) {
    if (std::find(header.begin(), header.end(), spec.name) == header.end()) {
      throw SchemaError(
          fmt::format("schema column '{}' is missing from the file", spec.name));
    }
  }
  if (records.size() == 1) {
    throw ParseError("file has a header but no data rows");
  }

  const std::size_t ncol = header.size();
  std::vector<std::vector<double>> numbers(ncol);
  std::vector<std::vector<std::string>> labels(ncol);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != ncol) {
      throw ParseError(fmt::format("row {}: expected {} fields, found {}", r,
                                   ncol, rec.size()));
    }
    for (std::size_t c = 0; c < ncol; ++c) {
      if (schema.find(header[c])->kind == VariableKind::continuous) {
        numbers[c].push_back(parse_real(rec[c], header[c], r));
      } else {
        labels[c].push_back(rec[c]);
      }
    }
  }

  std::vector<Variable> vars;
  vars.reserve(ncol);
  for (std::size_t c = 0; c < ncol; ++c) {
    if (schema.find(header[c])->kind == VariableKind::continuous) {
      vars.push_back(Variable::continuous(header[c], std::move(numbers[c])));
    } else {
      vars.push_back(Variable::categorical(header[c], labels[c]));
    }
  }
  return Dataset(std::move(vars));
}

Dataset load_dataset(const std::filesystem::path& path, const Schema& schema) {
  return parse_dataset_csv(read_text_file(path), schema);
}

std::string format_real(double value) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string format_dataset_csv(const Dataset& data) {
  std::string out;
  const auto vars = data.variables();
  for (std::size_t c = 0; c < vars.size(); ++c) {
    if (c) out.push_back(',');
    out += quote_field(vars[c].name());
  }
  out.push_back('\n');
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (std::size_t c = 0; c < vars.size(); ++c) {
      if (c) out.push_back(',');
      if (vars[c].is_continuous()) {
        out += format_real(vars[c].values()[r]);
      } else {
        out += quote_field(vars[c].label(r));
      }
    }
    out.push_back('\n');
  }
  return out;
}

void save_dataset(const Dataset& data, const std::filesystem::path& path) {
  write_text_file(path, format_dataset_csv(data));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) {
    throw IoError(fmt::format("error reading '{}'", path.string()));
  }
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw IoError(fmt::format("error writing '{}'", path.string()));
  }
}

}  // namespace lineup
