#include "lineup/export.hpp"

#include <fmt/format.h>

#include "json_util.hpp"
#include "lineup/error.hpp"
#include "lineup/render.hpp"

namespace lineup {

using detail::json;

namespace {

json mean_distances_json(const MeanDistances& md) {
  return {{"d_true", md.d_true}, {"d_null", md.d_null}};
}

json difficulty_json(const DifficultyReport& r) {
  return {{"delta", r.delta},
          {"gamma", r.gamma},
          {"verdict", std::string(to_string(r.verdict))},
          {"mean_distances", mean_distances_json(r.mean_distances)}};
}

}  // namespace

std::string difficulty_to_json(const DifficultyReport& report) {
  return difficulty_json(report).dump(2) + "\n";
}

DifficultyReport difficulty_from_json(std::string_view text) {
  constexpr std::string_view what = "difficulty report";
  const json doc = detail::parse_json(text, what);
  DifficultyReport r;
  r.delta = detail::field<double>(doc, "delta", what);
  r.gamma = detail::field<std::size_t>(doc, "gamma", what);
  const auto verdict = detail::field<std::string>(doc, "verdict", what);
  if (verdict == "easy") {
    r.verdict = Verdict::easy;
  } else if (verdict == "difficult") {
    r.verdict = Verdict::difficult;
  } else {
    throw SchemaError(fmt::format("{}: unknown verdict '{}'", what, verdict));
  }
  const json md = detail::field<json>(doc, "mean_distances", what);
  r.mean_distances.d_true = detail::field<double>(md, "d_true", what);
  r.mean_distances.d_null = detail::field<std::vector<double>>(md, "d_null", what);
  return r;
}

std::string distribution_to_json(const EmpiricalDistribution& dist) {
  json doc{{"N", dist.samples.size()},
           {"m", dist.m},
           {"seed", dist.seed},
           {"mechanism", json::parse(mechanism_to_json(dist.mechanism))},
           {"metric", json::parse(metric_to_json(dist.metric))},
           {"samples", dist.samples}};
  return doc.dump() + "\n";
}

EmpiricalDistribution distribution_from_json(std::string_view text) {
  constexpr std::string_view what = "empirical distribution";
  const json doc = detail::parse_json(text, what);
  EmpiricalDistribution dist;
  dist.samples = detail::field<std::vector<double>>(doc, "samples", what);
  dist.m = detail::field<std::size_t>(doc, "m", what);
  dist.seed = detail::field<std::uint64_t>(doc, "seed", what);
  dist.mechanism = parse_mechanism(detail::field<json>(doc, "mechanism", what).dump());
  dist.metric = parse_metric(detail::field<json>(doc, "metric", what).dump());
  if (doc.contains("N") &&
      detail::field<std::size_t>(doc, "N", what) != dist.samples.size()) {
    throw SchemaError(fmt::format("{}: N does not match the sample count", what));
  }
  return dist;
}

std::string distribution_to_csv(const EmpiricalDistribution& dist) {
  std::string out = "distance\n";
  for (double v : dist.samples) {
    out += format_real(v);
    out.push_back('\n');
  }
  return out;
}

std::string sweep_to_csv(const SweepResult& sweep) {
  std::string out = "p,q,delta\n";
  for (const auto& [cell, delta] : sweep.grid) {
    out += fmt::format("{},{},{}\n", cell.first, cell.second, format_real(delta));
  }
  return out;
}

std::string sweep_to_json(const SweepResult& sweep) {
  json cells = json::array();
  for (const auto& [cell, delta] : sweep.grid) {
    cells.push_back({{"p", cell.first}, {"q", cell.second}, {"delta", delta}});
  }
  json skipped = json::array();
  for (const auto& [cell, message] : sweep.skipped) {
    skipped.push_back({{"p", cell.first}, {"q", cell.second}, {"error", message}});
  }
  json doc{
      {"type", "tile"},
      {"x", "p"},
      {"y", "q"},
      {"fill", "delta"},
      {"palette", {{"low", "#ffffff"}, {"high", "#08306b"}}},
      {"p_range", {sweep.p_range.first, sweep.p_range.last}},
      {"q_range", {sweep.q_range.first, sweep.q_range.last}},
      {"cells", std::move(cells)},
      {"skipped", std::move(skipped)},
  };
  if (!sweep.grid.empty()) {
    doc["best"] = {{"p", sweep.best.p}, {"q", sweep.best.q}, {"delta", sweep.best.delta}};
    doc["worst"] = {{"p", sweep.worst.p}, {"q", sweep.worst.q}, {"delta", sweep.worst.delta}};
  }
  return doc.dump(2) + "\n";
}

void export_analysis(const AnalysisReport& report,
                     const std::filesystem::path& path,
                     const std::optional<MeanDistances>& marks) {
  const std::string ext = path.extension().string();
  auto unsupported = [&](std::string_view kind) -> std::string {
    throw PreconditionError(
        fmt::format("cannot export a {} as '{}'", kind, ext));
  };
  const std::string text = std::visit(
      [&](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, DifficultyReport>) {
          if (ext == ".json") return difficulty_to_json(r);
          if (ext == ".csv") {
            return fmt::format("delta,gamma,verdict,d_true\n{},{},{},{}\n",
                               format_real(r.delta), r.gamma,
                               to_string(r.verdict),
                               format_real(r.mean_distances.d_true));
          }
          return unsupported("difficulty report");
        } else if constexpr (std::is_same_v<T, EmpiricalDistribution>) {
          if (ext == ".json") return distribution_to_json(r);
          if (ext == ".csv") return distribution_to_csv(r);
          if (ext == ".svg") return render_distribution(r, marks);
          return unsupported("distribution");
        } else {
          if (ext == ".json") return sweep_to_json(r);
          if (ext == ".csv") return sweep_to_csv(r);
          if (ext == ".svg") return render_sweep(r);
          return unsupported("sweep");
        }
      },
      report);
  write_text_file(path, text);
}

}  // namespace lineup
