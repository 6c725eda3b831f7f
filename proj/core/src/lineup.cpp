#include "lineup/lineup.hpp"

#include <fmt/format.h>

#include "json_util.hpp"
#include "lineup/error.hpp"
#include "lineup/random.hpp"

namespace lineup {

using detail::json;

std::string_view to_string(PlotType type) {
  switch (type) {
    case PlotType::scatter: return "scatter";
    case PlotType::scatter_with_regression: return "scatter_with_regression";
    case PlotType::boxplot_pair: return "boxplot_pair";
    case PlotType::projection_1d: return "projection_1d";
    case PlotType::projection_2d: return "projection_2d";
  }
  return "scatter";
}

PlotType parse_plot_type(std::string_view text) {
  for (auto t : {PlotType::scatter, PlotType::scatter_with_regression,
                 PlotType::boxplot_pair, PlotType::projection_1d,
                 PlotType::projection_2d}) {
    if (to_string(t) == text) return t;
  }
  throw SchemaError(fmt::format("unknown plot type '{}'", text));
}

Lineup::Lineup(std::vector<Dataset> panels, std::size_t true_position,
               std::uint64_t seed, PlotType plot_type, std::string question)
    : panels_(std::move(panels)),
      true_position_(true_position),
      seed_(seed),
      plot_type_(plot_type),
      question_(std::move(question)) {
  if (panels_.size() < 2) {
    throw PreconditionError("a lineup needs at least one null panel");
  }
  if (true_position_ < 1 || true_position_ > panels_.size()) {
    throw PreconditionError(fmt::format(
        "true position {} outside 1..{}", true_position_, panels_.size()));
  }
  for (std::size_t i = 1; i < panels_.size(); ++i) {
    if (!same_structure(panels_.front(), panels_[i])) {
      throw SchemaError(fmt::format(
          "panel {} differs in structure from panel 1", i + 1));
    }
  }
}

const Dataset& Lineup::panel(std::size_t position) const {
  if (position < 1 || position > panels_.size()) {
    throw PreconditionError(
        fmt::format("panel {} outside 1..{}", position, panels_.size()));
  }
  return panels_[position - 1];
}

std::vector<std::size_t> Lineup::null_positions() const {
  std::vector<std::size_t> out;
  out.reserve(m() - 1);
  for (std::size_t pos = 1; pos <= m(); ++pos) {
    if (pos != true_position_) out.push_back(pos);
  }
  return out;
}

std::size_t draw_true_position(std::size_t m, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0));
  return 1 + rng.uniform_index(m);
}

Lineup assemble_lineup(const Dataset& true_data, std::vector<Dataset> nulls,
                       std::uint64_t seed, PlotType plot_type,
                       std::string question) {
  if (nulls.empty()) {
    throw PreconditionError("a lineup needs at least one null dataset");
  }
  for (std::size_t i = 0; i < nulls.size(); ++i) {
    if (!same_structure(true_data, nulls[i])) {
      throw SchemaError(fmt::format(
          "null dataset {} differs in structure from the true data", i + 1));
    }
  }
  const std::size_t m = nulls.size() + 1;
  const std::size_t position = draw_true_position(m, seed);
  std::vector<Dataset> panels;
  panels.reserve(m);
  auto next_null = nulls.begin();
  for (std::size_t pos = 1; pos <= m; ++pos) {
    if (pos == position) {
      panels.push_back(true_data);
    } else {
      panels.push_back(std::move(*next_null++));
    }
  }
  return Lineup(std::move(panels), position, seed, plot_type,
                std::move(question));
}

namespace detail {

json dataset_to_json_value(const Dataset& data) {
  json cols = json::array();
  for (const auto& v : data.variables()) {
    json col{{"name", v.name()}, {"kind", std::string(to_string(v.kind()))}};
    if (v.is_continuous()) {
      col["values"] = std::vector<double>(v.values().begin(), v.values().end());
    } else {
      col["levels"] =
          std::vector<std::string>(v.levels().begin(), v.levels().end());
      json labels = json::array();
      for (std::size_t r = 0; r < v.size(); ++r) labels.push_back(v.label(r));
      col["values"] = std::move(labels);
    }
    cols.push_back(std::move(col));
  }
  return json{{"columns", std::move(cols)}};
}

Dataset dataset_from_json_value(const json& value) {
  constexpr std::string_view what = "dataset";
  if (!value.is_object() || !value.contains("columns") ||
      !value["columns"].is_array()) {
    throw SchemaError("dataset: expected an object with a 'columns' array");
  }
  std::vector<Variable> vars;
  for (const auto& col : value["columns"]) {
    auto name = field<std::string>(col, "name", what);
    auto kind = parse_variable_kind(field<std::string>(col, "kind", what));
    if (kind == VariableKind::continuous) {
      vars.push_back(Variable::continuous(
          std::move(name), field<std::vector<double>>(col, "values", what)));
    } else {
      auto labels = field<std::vector<std::string>>(col, "values", what);
      if (col.contains("levels")) {
        auto levels = field<std::vector<std::string>>(col, "levels", what);
        std::vector<std::size_t> codes;
        codes.reserve(labels.size());
        for (const auto& label : labels) {
          auto it = std::find(levels.begin(), levels.end(), label);
          if (it == levels.end()) {
            throw SchemaError(fmt::format(
                "dataset: label '{}' not among the levels of '{}'", label, name));
          }
          codes.push_back(static_cast<std::size_t>(it - levels.begin()));
        }
        vars.push_back(Variable::categorical(std::move(name), std::move(levels),
                                             std::move(codes)));
      } else {
        vars.push_back(Variable::categorical(std::move(name), labels));
      }
    }
  }
  return Dataset(std::move(vars));
}

}  // namespace detail

std::string dataset_to_json(const Dataset& data) {
  return detail::dataset_to_json_value(data).dump();
}

Dataset dataset_from_json(std::string_view text) {
  return detail::dataset_from_json_value(detail::parse_json(text, "dataset"));
}

std::string lineup_to_json(const Lineup& lineup, Audience audience) {
  json doc;
  doc["m"] = lineup.m();
  if (audience == Audience::analyst) {
    doc["true_position"] = lineup.true_position();
    doc["seed"] = lineup.seed();
  }
  doc["plot_type"] = std::string(to_string(lineup.plot_type()));
  doc["question"] = lineup.question();
  json panels = json::array();
  for (const auto& p : lineup.panels()) {
    panels.push_back(detail::dataset_to_json_value(p));
  }
  doc["panels"] = std::move(panels);
  return doc.dump();
}

Lineup lineup_from_json(std::string_view text) {
  constexpr std::string_view what = "lineup";
  const json doc = detail::parse_json(text, what);
  const auto m = detail::field<std::size_t>(doc, "m", what);
  const auto position = detail::field<std::size_t>(doc, "true_position", what);
  const auto seed = detail::field<std::uint64_t>(doc, "seed", what);
  const auto plot_type =
      parse_plot_type(detail::field<std::string>(doc, "plot_type", what));
  auto question = doc.value("question", std::string{});
  if (!doc.contains("panels") || !doc["panels"].is_array()) {
    throw SchemaError("lineup: missing 'panels' array");
  }
  std::vector<Dataset> panels;
  for (const auto& p : doc["panels"]) {
    panels.push_back(detail::dataset_from_json_value(p));
  }
  if (panels.size() != m) {
    throw SchemaError(
        fmt::format("lineup: m = {} but {} panels given", m, panels.size()));
  }
  return Lineup(std::move(panels), position, seed, plot_type,
                std::move(question));
}

Lineup load_lineup(const std::filesystem::path& path) {
  return lineup_from_json(read_text_file(path));
}

void save_lineup(const Lineup& lineup, const std::filesystem::path& path) {
  write_text_file(path, lineup_to_json(lineup) + "\n");
}

}  // namespace lineup
