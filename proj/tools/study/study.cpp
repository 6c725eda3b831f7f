#include "study.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <map>
#include <set>

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>

#include "lineup/dataset.hpp"
#include "lineup/error.hpp"
#include "lineup/render.hpp"

namespace lineup::study {

using json = nlohmann::json;

namespace {

json parse_body(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("{}: {}", what, e.what()));
  }
}

std::string required_string(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_string()) {
    throw SchemaError(fmt::format("response: '{}' must be a string", key));
  }
  return doc[key].get<std::string>();
}

std::uint64_t required_count(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer() ||
      !doc[key].is_number_unsigned()) {
    throw SchemaError(
        fmt::format("response: '{}' must be a nonnegative integer", key));
  }
  return doc[key].get<std::uint64_t>();
}

bool valid_id(std::string_view id) {
  if (id.empty() || id.size() > 128) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
           c == '.';
  });
}

}  // namespace

std::string current_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string response_to_json(const ObserverResponse& r) {
  return json{{"lineup_id", r.lineup_id},
              {"picked_position", r.picked_position},
              {"reason", r.reason},
              {"response_time_ms", r.response_time_ms},
              {"observer_id", r.observer_id},
              {"timestamp", r.timestamp}}
      .dump();
}

ObserverResponse response_from_json(std::string_view text) {
  const json doc = parse_body(text, "response");
  if (!doc.is_object()) throw SchemaError("response: expected a JSON object");
  ObserverResponse r;
  r.lineup_id = required_string(doc, "lineup_id");
  r.observer_id = required_string(doc, "observer_id");
  r.picked_position = static_cast<std::size_t>(required_count(doc, "picked_position"));
  r.response_time_ms = required_count(doc, "response_time_ms");
  if (doc.contains("reason") && !doc["reason"].is_null()) {
    if (!doc["reason"].is_string()) {
      throw SchemaError("response: 'reason' must be a string");
    }
    r.reason = doc["reason"].get<std::string>();
  }
  if (doc.contains("timestamp") && doc["timestamp"].is_string()) {
    r.timestamp = doc["timestamp"].get<std::string>();
  }
  if (r.observer_id.empty()) throw SchemaError("response: empty observer_id");
  return r;
}

// ---- LineupStore ---------------------------------------------------------------

LineupStore LineupStore::load(const std::filesystem::path& dir) {
  LineupStore store;
  const auto lineup_dir = dir / "lineups";
  if (!std::filesystem::is_directory(lineup_dir)) return store;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(lineup_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    store.add(f.stem().string(), load_lineup(f));
  }
  return store;
}

void LineupStore::save(const std::filesystem::path& dir, std::string_view id,
                       const Lineup& lineup) {
  if (!valid_id(id)) {
    throw PreconditionError(fmt::format("invalid lineup id '{}'", id));
  }
  std::error_code ec;
  std::filesystem::create_directories(dir / "lineups", ec);
  if (ec) {
    throw IoError(fmt::format("cannot create '{}': {}",
                              (dir / "lineups").string(), ec.message()));
  }
  save_lineup(lineup, dir / "lineups" / (std::string(id) + ".json"));
}

void LineupStore::add(std::string id, Lineup lineup) {
  if (!valid_id(id)) {
    throw PreconditionError(fmt::format("invalid lineup id '{}'", id));
  }
  if (find(id)) {
    throw PreconditionError(fmt::format("duplicate lineup id '{}'", id));
  }
  entries_.push_back({std::move(id), std::move(lineup)});
}

const Lineup* LineupStore::find(std::string_view id) const {
  for (const auto& e : entries_) {
    if (e.id == id) return &e.lineup;
  }
  return nullptr;
}

// ---- ResponseStore -------------------------------------------------------------

ResponseStore::ResponseStore(std::filesystem::path file) : file_(std::move(file)) {
  if (std::filesystem::exists(file_)) {
    const std::string text = read_text_file(file_);
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start < text.size()) {
      std::size_t end = text.find('\n', start);
      const bool last = end == std::string::npos;
      if (last) end = text.size();
      ++line_no;
      const std::string_view line(text.data() + start, end - start);
      if (!line.empty()) {
        try {
          responses_.push_back(response_from_json(line));
        } catch (const Error&) {
          // A torn final line from an interrupted append is dropped.
          if (!last) {
            throw ParseError(fmt::format("{}: line {} is not a response",
                                         file_.string(), line_no));
          }
        }
      }
      start = end + 1;
    }
  }
  if (file_.has_parent_path()) {
    std::filesystem::create_directories(file_.parent_path());
  }
  out_.open(file_, std::ios::binary | std::ios::app);
  if (!out_) {
    throw IoError(fmt::format("cannot open '{}' for appending", file_.string()));
  }
}

ResponseStore::AppendResult ResponseStore::append(const ObserverResponse& r) {
  std::unique_lock lock(mutex_);
  for (const auto& existing : responses_) {
    if (existing.observer_id == r.observer_id &&
        existing.lineup_id == r.lineup_id) {
      return AppendResult::duplicate;
    }
  }
  out_ << response_to_json(r) << '\n';
  out_.flush();
  if (!out_) {
    throw IoError(fmt::format("error appending to '{}'", file_.string()));
  }
  responses_.push_back(r);
  return AppendResult::stored;
}

std::vector<ObserverResponse> ResponseStore::snapshot() const {
  std::shared_lock lock(mutex_);
  return responses_;
}

bool ResponseStore::answered(std::string_view observer_id,
                             std::string_view lineup_id) const {
  std::shared_lock lock(mutex_);
  return std::any_of(responses_.begin(), responses_.end(), [&](const auto& r) {
    return r.observer_id == observer_id && r.lineup_id == lineup_id;
  });
}

std::size_t ResponseStore::size() const {
  std::shared_lock lock(mutex_);
  return responses_.size();
}

// ---- summaries -----------------------------------------------------------------

namespace {

std::optional<DifficultyReport> try_difficulty(const Lineup& lineup,
                                               const std::optional<MetricKind>& metric) {
  if (!metric) return std::nullopt;
  try {
    return difficulty(mean_distances(lineup, *metric));
  } catch (const Error&) {
    return std::nullopt;
  }
}

StudySummary summarize_with(const LineupStore& lineups,
                            std::span<const ObserverResponse> responses,
                            const std::optional<MetricKind>& metric,
                            const std::vector<std::optional<DifficultyReport>>* cached) {
  StudySummary summary;
  summary.metric = metric;
  std::map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < lineups.entries().size(); ++i) {
    const auto& e = lineups.entries()[i];
    LineupSummary s;
    s.lineup_id = e.id;
    s.m = e.lineup.m();
    s.difficulty = cached ? (*cached)[i] : try_difficulty(e.lineup, metric);
    index.emplace(e.id, i);
    summary.lineups.push_back(std::move(s));
  }
  std::vector<double> time_sum(summary.lineups.size(), 0.0);
  std::set<std::pair<std::string_view, std::string_view>> seen;
  for (const auto& r : responses) {
    auto it = index.find(r.lineup_id);
    if (it == index.end()) continue;
    if (!seen.emplace(r.observer_id, r.lineup_id).second) continue;
    auto& s = summary.lineups[it->second];
    const auto& lineup = lineups.entries()[it->second].lineup;
    ++s.n_responses;
    if (r.picked_position == lineup.true_position()) ++s.n_correct;
    time_sum[it->second] += static_cast<double>(r.response_time_ms);
  }
  for (std::size_t i = 0; i < summary.lineups.size(); ++i) {
    auto& s = summary.lineups[i];
    if (s.n_responses > 0) {
      const double n = static_cast<double>(s.n_responses);
      s.detection_rate = static_cast<double>(s.n_correct) / n;
      s.mean_time_ms = time_sum[i] / n;
    }
  }
  return summary;
}

}  // namespace

StudySummary summarize(const LineupStore& lineups,
                       std::span<const ObserverResponse> responses,
                       const std::optional<MetricKind>& metric) {
  return summarize_with(lineups, responses, metric, nullptr);
}

std::string summary_to_json(const StudySummary& summary) {
  json rows = json::array();
  for (const auto& s : summary.lineups) {
    json row{{"lineup_id", s.lineup_id},
             {"m", s.m},
             {"n_responses", s.n_responses},
             {"n_correct", s.n_correct},
             {"detection_rate", s.detection_rate},
             {"mean_time_ms", s.mean_time_ms}};
    if (s.difficulty) {
      row["delta"] = s.difficulty->delta;
      row["gamma"] = s.difficulty->gamma;
      row["verdict"] = std::string(to_string(s.difficulty->verdict));
    } else {
      row["delta"] = nullptr;
      row["gamma"] = nullptr;
      row["verdict"] = nullptr;
    }
    rows.push_back(std::move(row));
  }
  json doc{{"lineups", std::move(rows)}};
  doc["metric"] = summary.metric ? json::parse(metric_to_json(*summary.metric))
                                 : json(nullptr);
  return doc.dump();
}

std::string summary_to_csv(const StudySummary& summary) {
  std::string out =
      "lineup_id,m,n_responses,n_correct,detection_rate,mean_time_ms,delta,gamma,verdict\n";
  for (const auto& s : summary.lineups) {
    out += fmt::format("{},{},{},{},{},{},", s.lineup_id, s.m, s.n_responses,
                       s.n_correct, format_real(s.detection_rate),
                       format_real(s.mean_time_ms));
    if (s.difficulty) {
      out += fmt::format("{},{},{}\n", format_real(s.difficulty->delta),
                         s.difficulty->gamma, to_string(s.difficulty->verdict));
    } else {
      out += ",,\n";
    }
  }
  return out;
}

std::string response_times_csv(const LineupStore& lineups,
                               std::span<const ObserverResponse> responses) {
  std::string out = "lineup_id,observer_id,picked_position,correct,response_time_ms\n";
  std::set<std::pair<std::string_view, std::string_view>> seen;
  for (const auto& r : responses) {
    const Lineup* lineup = lineups.find(r.lineup_id);
    if (!lineup || !seen.emplace(r.observer_id, r.lineup_id).second) continue;
    out += fmt::format("{},{},{},{},{}\n", r.lineup_id, r.observer_id,
                       r.picked_position,
                       r.picked_position == lineup->true_position() ? 1 : 0,
                       r.response_time_ms);
  }
  return out;
}

std::string served_to_json(const ServedLineup& served) {
  return json{{"lineup_id", served.lineup_id},
              {"svg", served.svg},
              {"m", served.m},
              {"question", served.question}}
      .dump();
}

// ---- StudyService --------------------------------------------------------------

StudyService::StudyService(LineupStore lineups,
                           const std::filesystem::path& response_file,
                           std::optional<MetricKind> metric)
    : lineups_(std::move(lineups)),
      responses_(response_file),
      metric_(std::move(metric)) {
  if (lineups_.empty()) {
    throw PreconditionError("the study has no lineups");
  }
  for (const auto& e : lineups_.entries()) {
    svgs_.push_back(render_lineup(e.lineup, false));
    difficulty_.push_back(try_difficulty(e.lineup, metric_));
  }
}

std::optional<ServedLineup> StudyService::next_for(std::string_view observer_id) const {
  const auto entries = lineups_.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!responses_.answered(observer_id, entries[i].id)) {
      return ServedLineup{entries[i].id, svgs_[i], entries[i].lineup.m(),
                          entries[i].lineup.question()};
    }
  }
  return std::nullopt;
}

SubmitOutcome StudyService::submit(ObserverResponse response) {
  const Lineup* lineup = lineups_.find(response.lineup_id);
  if (!lineup) {
    return {SubmitStatus::unknown_lineup,
            fmt::format("unknown lineup '{}'", response.lineup_id)};
  }
  if (response.picked_position < 1 || response.picked_position > lineup->m()) {
    return {SubmitStatus::invalid,
            fmt::format("picked_position must be in 1..{}", lineup->m())};
  }
  if (response.timestamp.empty()) response.timestamp = current_timestamp();
  if (responses_.append(response) == ResponseStore::AppendResult::duplicate) {
    return {SubmitStatus::duplicate,
            "this observer already answered this lineup"};
  }
  return {SubmitStatus::stored, "stored"};
}

StudySummary StudyService::summary() const {
  const auto snapshot = responses_.snapshot();
  return summarize_with(lineups_, snapshot, metric_, &difficulty_);
}

// ---- StudyServer ---------------------------------------------------------------

struct StudyServer::Impl {
  StudyService& service;
  ServerConfig config;
  httplib::Server server;
  int port = -1;

  Impl(StudyService& s, ServerConfig c) : service(s), config(std::move(c)) {}

  static void reply_error(httplib::Response& res, int status,
                          std::string_view message) {
    res.status = status;
    res.set_content(json{{"error", message}}.dump(), "application/json");
  }

  void install_routes() {
    server.set_post_routing_handler(
        [this](const httplib::Request&, httplib::Response& res) {
          res.set_header("Access-Control-Allow-Origin", config.cors_origin);
          res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
          res.set_header("Access-Control-Allow-Headers", "Content-Type");
        });
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
    });
    server.Get("/lineups/next", [this](const httplib::Request& req,
                                       httplib::Response& res) {
      const std::string observer = req.get_param_value("observer");
      if (observer.empty()) {
        reply_error(res, 400, "missing 'observer' query parameter");
        return;
      }
      auto served = service.next_for(observer);
      if (!served) {
        res.status = 204;
        return;
      }
      res.set_content(served_to_json(*served), "application/json");
    });
    server.Post("/responses", [this](const httplib::Request& req,
                                     httplib::Response& res) {
      ObserverResponse response;
      try {
        response = response_from_json(req.body);
      } catch (const Error& e) {
        reply_error(res, 400, e.what());
        return;
      }
      SubmitOutcome outcome;
      try {
        outcome = service.submit(std::move(response));
      } catch (const Error& e) {
        reply_error(res, 500, e.what());
        return;
      }
      switch (outcome.status) {
        case SubmitStatus::stored:
          res.status = 201;
          res.set_content(json{{"status", "stored"}}.dump(), "application/json");
          break;
        case SubmitStatus::invalid: reply_error(res, 400, outcome.message); break;
        case SubmitStatus::unknown_lineup: reply_error(res, 404, outcome.message); break;
        case SubmitStatus::duplicate: reply_error(res, 409, outcome.message); break;
      }
    });
    server.Get("/summary", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(summary_to_json(service.summary()), "application/json");
    });
  }
};

StudyServer::StudyServer(StudyService& service, ServerConfig config)
    : impl_(std::make_unique<Impl>(service, std::move(config))) {
  impl_->install_routes();
}

StudyServer::~StudyServer() { stop(); }

int StudyServer::bind() {
  auto& i = *impl_;
  if (i.config.port == 0) {
    i.port = i.server.bind_to_any_port(i.config.host);
  } else {
    i.port = i.server.bind_to_port(i.config.host, i.config.port) ? i.config.port : -1;
  }
  if (i.port < 0) {
    throw IoError(fmt::format("cannot bind {}:{}", i.config.host, i.config.port));
  }
  return i.port;
}

void StudyServer::run() {
  if (impl_->port < 0) bind();
  impl_->server.listen_after_bind();
}

void StudyServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace lineup::study
