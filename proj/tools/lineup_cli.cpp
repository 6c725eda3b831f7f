#include <atomic>
#include <csignal>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "lineup/lineup_all.hpp"
#include "study/study.hpp"

namespace fs = std::filesystem;
using namespace lineup;

namespace {

enum ExitCode {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kIo = 3,
  kInput = 4,
  kPrecondition = 5,
};

// A JSON flag is either inline JSON or the path of a file holding it.
std::string json_argument(const std::string& value) {
  const auto first = value.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && value[first] == '{') return value;
  return read_text_file(value);
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    write_text_file(out, text);
  }
}

Dataset read_data(const std::string& data, const std::string& schema) {
  return load_dataset(data, load_schema(schema));
}

std::string metrics_json(const Lineup& lineup, const MetricKind& metric) {
  const DistanceMatrix d = pairwise_distances(lineup.panels(), metric);
  nlohmann::ordered_json doc;
  doc["metric"] = describe(metric);
  doc["m"] = lineup.m();
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < d.size(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < d.size(); ++j) row.push_back(d.at(i, j));
    rows.push_back(std::move(row));
  }
  doc["pairwise"] = std::move(rows);
  if (lineup.m() >= 3) {
    const MeanDistances md = mean_distances(d, lineup.true_position());
    doc["true_position"] = lineup.true_position();
    doc["d_true"] = md.d_true;
    auto nulls = nlohmann::ordered_json::array();
    const auto positions = lineup.null_positions();
    for (std::size_t k = 0; k < positions.size(); ++k) {
      nulls.push_back({{"position", positions[k]}, {"d_null", md.d_null[k]}});
    }
    doc["d_null"] = std::move(nulls);
  }
  return doc.dump(2);
}

std::atomic<study::StudyServer*> g_server{nullptr};

void handle_signal(int) {
  if (auto* s = g_server.load()) s->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lineup protocol toolkit: null lineups, distance metrics, "
               "difficulty scores and observer studies"};
  app.require_subcommand(1);

  std::string data, schema, mechanism, metric, lineup_path, out, store, id;
  std::string p_range = "2:10", q_range = "2:10", plot_type = "scatter";
  std::string question = "Which plot is the most different?";
  std::string host = "127.0.0.1", cors_origin = "*", times_out;
  std::size_t m = 20, N = 1000;
  std::uint64_t seed = 0;
  int port = 8080;
  bool reveal = false;

  auto* generate = app.add_subcommand("generate", "Build a lineup from data and a null mechanism");
  generate->add_option("--data", data, "CSV data file")->required();
  generate->add_option("--schema", schema, "JSON schema file")->required();
  generate->add_option("--mechanism", mechanism, "Null mechanism (JSON or file)")->required();
  generate->add_option("--m", m, "Number of panels")->capture_default_str();
  auto* generate_seed = generate->add_option(
      "--seed", seed, "Seed for nulls and the true position (default: the mechanism's seed)");
  generate->add_option("--plot-type", plot_type)->capture_default_str();
  generate->add_option("--question", question)->capture_default_str();
  generate->add_option("--out", out, "Lineup JSON output (stdout if omitted)");
  generate->add_option("--store", store, "Study directory to add the lineup to");
  generate->add_option("--id", id, "Lineup id inside --store")->needs("--store");

  auto* metrics = app.add_subcommand("metrics", "Pairwise and mean distances of a lineup");
  metrics->add_option("--lineup", lineup_path)->required();
  metrics->add_option("--metric", metric, "Metric (JSON or file)")->required();
  metrics->add_option("--out", out);

  auto* distribution = app.add_subcommand("distribution", "Empirical distribution of mean null distances");
  distribution->add_option("--data", data)->required();
  distribution->add_option("--schema", schema)->required();
  distribution->add_option("--mechanism", mechanism)->required();
  distribution->add_option("--metric", metric)->required();
  distribution->add_option("--m", m)->capture_default_str();
  distribution->add_option("--N", N)->capture_default_str();
  auto* distribution_seed =
      distribution->add_option("--seed", seed, "Seed (default: the mechanism's seed)");
  distribution->add_option("--lineup", lineup_path, "Lineup whose mean distances are marked in SVG output");
  distribution->add_option("--out", out, ".json, .csv or .svg (JSON on stdout if omitted)");

  auto* diff = app.add_subcommand("difficulty", "Difficulty score of a lineup");
  diff->add_option("--lineup", lineup_path)->required();
  diff->add_option("--metric", metric)->required();
  diff->add_option("--out", out, ".json report");

  auto* sweep = app.add_subcommand("sweep", "Difficulty over a grid of bin counts");
  sweep->add_option("--lineup", lineup_path)->required();
  sweep->add_option("--p-range", p_range)->capture_default_str();
  sweep->add_option("--q-range", q_range)->capture_default_str();
  sweep->add_option("--out", out, ".csv, .json or .svg (CSV on stdout if omitted)");

  auto* render = app.add_subcommand("render", "Render a lineup as SVG");
  render->add_option("--lineup", lineup_path)->required();
  render->add_flag("--reveal", reveal, "Highlight the true panel");
  render->add_option("--out", out);

  auto* serve = app.add_subcommand("serve", "Run the observer study service");
  serve->add_option("--store", store, "Study directory")->required();
  serve->add_option("--port", port)->capture_default_str();
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--metric", metric, "Metric for difficulty in /summary");
  serve->add_option("--cors-origin", cors_origin)->capture_default_str();

  auto* summarize = app.add_subcommand("summarize", "Join responses with difficulty scores");
  summarize->add_option("--store", store, "Study directory")->required();
  summarize->add_option("--metric", metric);
  summarize->add_option("--out", out, "CSV output (stdout if omitted)");
  summarize->add_option("--times", times_out, "CSV of raw response times");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    std::optional<MetricKind> metric_kind;
    if (!metric.empty()) metric_kind = parse_metric(json_argument(metric));

    if (*generate) {
      const Dataset d = read_data(data, schema);
      const NullMechanism mech = parse_mechanism(json_argument(mechanism));
      if (generate_seed->count() == 0) seed = mech.seed;
      if (m < 2) throw PreconditionError("--m must be at least 2");
      auto nulls = generate_nulls(d, mech, m - 1, seed);
      const Lineup l = assemble_lineup(d, std::move(nulls), seed,
                                       parse_plot_type(plot_type), question);
      if (!store.empty()) {
        study::LineupStore::save(store, id.empty() ? fmt::format("lineup-{}", seed) : id, l);
      }
      if (!out.empty() || store.empty()) emit(lineup_to_json(l), out);
    } else if (*metrics) {
      emit(metrics_json(load_lineup(lineup_path), *metric_kind), out);
    } else if (*distribution) {
      const Dataset d = read_data(data, schema);
      const NullMechanism mech = parse_mechanism(json_argument(mechanism));
      if (distribution_seed->count() == 0) seed = mech.seed;
      const auto dist = empirical_distribution(d, mech, *metric_kind, m, N, seed);
      std::optional<MeanDistances> marks;
      if (!lineup_path.empty()) marks = mean_distances(load_lineup(lineup_path), *metric_kind);
      if (out.empty()) {
        emit(distribution_to_json(dist), out);
      } else {
        export_analysis(dist, out, marks);
      }
    } else if (*diff) {
      const Lineup l = load_lineup(lineup_path);
      const DifficultyReport r = difficulty(mean_distances(l, *metric_kind));
      std::cout << fmt::format("delta={} gamma={} verdict={}\n", format_real(r.delta),
                               r.gamma, to_string(r.verdict));
      if (!out.empty()) export_analysis(r, out);
    } else if (*sweep) {
      const Lineup l = load_lineup(lineup_path);
      const SweepResult s = sweep_bins(l, parse_bin_range(p_range), parse_bin_range(q_range));
      if (out.empty()) {
        emit(sweep_to_csv(s), out);
      } else {
        export_analysis(s, out);
        if (!s.grid.empty()) {
          std::cout << fmt::format("best p={} q={} delta={}\n", s.best.p, s.best.q,
                                   format_real(s.best.delta));
        }
      }
      for (const auto& [cell, why] : s.skipped) {
        std::cerr << fmt::format("warning: skipped ({},{}): {}\n", cell.first, cell.second, why);
      }
    } else if (*render) {
      emit(render_lineup(load_lineup(lineup_path), reveal), out);
    } else if (*serve) {
      study::StudyService service(study::LineupStore::load(store),
                                  fs::path(store) / "responses.jsonl", metric_kind);
      study::StudyServer server(service, {host, port, cors_origin});
      const int bound = server.bind();
      g_server = &server;
      std::signal(SIGINT, handle_signal);
      std::signal(SIGTERM, handle_signal);
      std::cerr << fmt::format("serving {} lineups on http://{}:{}\n",
                               service.lineups().entries().size(), host, bound);
      server.run();
      g_server = nullptr;
    } else if (*summarize) {
      const auto lineups = study::LineupStore::load(store);
      if (lineups.empty()) throw PreconditionError(fmt::format("no lineups in '{}'", store));
      const auto responses =
          study::ResponseStore(fs::path(store) / "responses.jsonl").snapshot();
      emit(study::summary_to_csv(study::summarize(lineups, responses, metric_kind)), out);
      if (!times_out.empty()) {
        write_text_file(times_out, study::response_times_csv(lineups, responses));
      }
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
