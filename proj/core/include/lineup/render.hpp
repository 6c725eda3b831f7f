#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "lineup/binsweep.hpp"
#include "lineup/inference.hpp"
#include "lineup/lineup.hpp"
#include "lineup/metrics.hpp"

namespace lineup {

// Grid of panels, numbered row-major from 1. Every panel maps data through
// the same x_range / y_range so panels are visually comparable.
struct PanelLayout {
  std::size_t rows = 4;
  std::size_t cols = 5;
  double panel_width = 160.0;
  double panel_height = 160.0;
  double gap = 8.0;
  Interval x_range;
  Interval y_range;
};

// cols = ceil(sqrt(m)), rows = ceil(m / cols); ranges cover every panel and
// are padded by 4% on each side.
PanelLayout default_layout(const Lineup& lineup, double panel_size = 160.0);

// SVG 1.1 document with one <g class="panel" data-panel="k"> per panel. Each
// panel group carries its bounding box (data-bbox) for click hit-testing.
// Without `reveal` the output depends only on the panel data, never on
// which panel is the true one.
std::string render_lineup(const Lineup& lineup, const PanelLayout& layout,
                          bool reveal = false);
std::string render_lineup(const Lineup& lineup, bool reveal = false);

// Density curve of the empirical samples with rug marks for the lineup's
// mean distances: one highlighted (class "rug-true") for the true panel and
// one plain mark (class "rug-null") per null panel.
std::string render_distribution(const EmpiricalDistribution& dist,
                                const std::optional<MeanDistances>& marks = {});

// Tile plot of delta per (p, q); darker blue is larger.
std::string render_sweep(const SweepResult& sweep);

}  // namespace lineup
