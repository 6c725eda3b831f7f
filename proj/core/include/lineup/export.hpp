#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "lineup/binsweep.hpp"
#include "lineup/inference.hpp"

namespace lineup {

// {"delta", "gamma", "verdict", "mean_distances": {"d_true", "d_null": [...]}}
std::string difficulty_to_json(const DifficultyReport& report);
DifficultyReport difficulty_from_json(std::string_view text);

// {"N", "m", "seed", "mechanism": {...}, "metric": {...}, "samples": [...]}
std::string distribution_to_json(const EmpiricalDistribution& dist);
EmpiricalDistribution distribution_from_json(std::string_view text);
// Single column with header "distance".
std::string distribution_to_csv(const EmpiricalDistribution& dist);

// Header "p,q,delta", one row per evaluated cell, p-major.
std::string sweep_to_csv(const SweepResult& sweep);
// Tile-plot spec: ranges, cells, best, worst and skipped cells.
std::string sweep_to_json(const SweepResult& sweep);

using AnalysisReport =
    std::variant<DifficultyReport, EmpiricalDistribution, SweepResult>;

// Format is picked from the extension: .json, .csv or .svg. For a
// distribution the SVG draws `marks` as rug marks when given. Throws
// PreconditionError for an unsupported extension and IoError when the file
// cannot be written.
void export_analysis(const AnalysisReport& report,
                     const std::filesystem::path& path,
                     const std::optional<MeanDistances>& marks = {});

}  // namespace lineup
