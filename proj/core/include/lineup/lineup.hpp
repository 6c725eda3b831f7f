#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lineup/dataset.hpp"

namespace lineup {

enum class PlotType {
  scatter,
  scatter_with_regression,
  boxplot_pair,
  projection_1d,
  projection_2d,
};

std::string_view to_string(PlotType type);
PlotType parse_plot_type(std::string_view text);

// m structurally identical panels, one of which (true_position, 1-based)
// holds the observed data.
class Lineup {
 public:
  Lineup(std::vector<Dataset> panels, std::size_t true_position,
         std::uint64_t seed, PlotType plot_type, std::string question);

  std::size_t m() const { return panels_.size(); }
  std::size_t true_position() const { return true_position_; }
  std::uint64_t seed() const { return seed_; }
  PlotType plot_type() const { return plot_type_; }
  const std::string& question() const { return question_; }

  std::span<const Dataset> panels() const { return panels_; }
  // 1-based.
  const Dataset& panel(std::size_t position) const;
  const Dataset& true_data() const { return panel(true_position_); }
  // 1-based positions of the null panels, ascending.
  std::vector<std::size_t> null_positions() const;

  friend bool operator==(const Lineup&, const Lineup&) = default;

 private:
  std::vector<Dataset> panels_;
  std::size_t true_position_;
  std::uint64_t seed_;
  PlotType plot_type_;
  std::string question_;
};

// Places true_data at a position drawn uniformly from 1..m with the given
// seed; nulls fill the remaining positions in their given order.
Lineup assemble_lineup(const Dataset& true_data, std::vector<Dataset> nulls,
                       std::uint64_t seed, PlotType plot_type,
                       std::string question);

// The position assemble_lineup would choose for (m, seed).
std::size_t draw_true_position(std::size_t m, std::uint64_t seed);

enum class Audience {
  analyst,   // full record, including true_position and seed
  observer,  // true_position and seed withheld
};

// {m, true_position, seed, plot_type, question, panels:[{columns:[...]}]}
std::string lineup_to_json(const Lineup& lineup,
                           Audience audience = Audience::analyst);
Lineup lineup_from_json(std::string_view text);

Lineup load_lineup(const std::filesystem::path& path);
void save_lineup(const Lineup& lineup, const std::filesystem::path& path);

// {"columns":[{"name","kind","values":[...]}]}; categorical columns also
// carry "levels" and list their values as labels.
std::string dataset_to_json(const Dataset& data);
Dataset dataset_from_json(std::string_view text);

}  // namespace lineup
