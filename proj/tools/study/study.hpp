#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <fstream>

#include "lineup/inference.hpp"
#include "lineup/lineup.hpp"
#include "lineup/metrics.hpp"

namespace lineup::study {

struct ObserverResponse {
  std::string lineup_id;
  std::size_t picked_position = 0;
  std::string reason;
  std::uint64_t response_time_ms = 0;
  std::string observer_id;
  std::string timestamp;  // ISO 8601, UTC

  friend bool operator==(const ObserverResponse&, const ObserverResponse&) = default;
};

std::string response_to_json(const ObserverResponse& response);
// Throws ParseError / SchemaError for malformed bodies. A missing timestamp
// is left empty.
ObserverResponse response_from_json(std::string_view text);

// Lineups of a study, stored as <dir>/lineups/<id>.json and served in id
// order.
class LineupStore {
 public:
  struct Entry {
    std::string id;
    Lineup lineup;
  };

  static LineupStore load(const std::filesystem::path& dir);
  // Writes <dir>/lineups/<id>.json, creating directories as needed.
  static void save(const std::filesystem::path& dir, std::string_view id,
                   const Lineup& lineup);

  void add(std::string id, Lineup lineup);
  const Lineup* find(std::string_view id) const;
  std::span<const Entry> entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<Entry> entries_;
};

// Append-only JSON-lines file of responses. Appends are serialised through a
// single writer; readers get a consistent snapshot.
class ResponseStore {
 public:
  explicit ResponseStore(std::filesystem::path file);

  enum class AppendResult { stored, duplicate };
  AppendResult append(const ObserverResponse& response);

  std::vector<ObserverResponse> snapshot() const;
  bool answered(std::string_view observer_id, std::string_view lineup_id) const;
  std::size_t size() const;

 private:
  std::filesystem::path file_;
  mutable std::shared_mutex mutex_;
  std::vector<ObserverResponse> responses_;
  std::ofstream out_;
};

struct LineupSummary {
  std::string lineup_id;
  std::size_t m = 0;
  std::size_t n_responses = 0;
  std::size_t n_correct = 0;
  double detection_rate = 0.0;  // 0 when there are no responses
  double mean_time_ms = 0.0;    // 0 when there are no responses
  std::optional<DifficultyReport> difficulty;
};

struct StudySummary {
  std::optional<MetricKind> metric;
  std::vector<LineupSummary> lineups;
};

// Joins responses with lineups. Only the first response of each
// (observer, lineup) pair counts; responses to unknown lineups are ignored.
StudySummary summarize(const LineupStore& lineups,
                       std::span<const ObserverResponse> responses,
                       const std::optional<MetricKind>& metric);

std::string summary_to_json(const StudySummary& summary);
// lineup_id,m,n_responses,n_correct,detection_rate,mean_time_ms,delta,gamma,verdict
std::string summary_to_csv(const StudySummary& summary);
// Raw per-response times: lineup_id,observer_id,picked_position,correct,response_time_ms
std::string response_times_csv(const LineupStore& lineups,
                                std::span<const ObserverResponse> responses);

struct ServedLineup {
  std::string lineup_id;
  std::string svg;
  std::size_t m = 0;
  std::string question;
};

// {lineup_id, svg, m, question}; never carries the true position.
std::string served_to_json(const ServedLineup& served);

enum class SubmitStatus { stored, invalid, unknown_lineup, duplicate };

struct SubmitOutcome {
  SubmitStatus status;
  std::string message;
};

// Transport-independent study logic behind the HTTP endpoints.
class StudyService {
 public:
  StudyService(LineupStore lineups, const std::filesystem::path& response_file,
               std::optional<MetricKind> metric = {});

  // First stored lineup the observer has not answered yet.
  std::optional<ServedLineup> next_for(std::string_view observer_id) const;
  SubmitOutcome submit(ObserverResponse response);
  StudySummary summary() const;

  const LineupStore& lineups() const { return lineups_; }
  const ResponseStore& responses() const { return responses_; }

 private:
  LineupStore lineups_;
  std::vector<std::string> svgs_;  // unrevealed, parallel to lineups_
  ResponseStore responses_;
  std::optional<MetricKind> metric_;
  std::vector<std::optional<DifficultyReport>> difficulty_;
};

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::string cors_origin = "*";
};

// HTTP front end:
//   GET  /lineups/next?observer=ID  200 lineup | 204 none left | 400
//   POST /responses                  201 | 400 | 404 | 409
//   GET  /summary                    200 StudySummary
class StudyServer {
 public:
  StudyServer(StudyService& service, ServerConfig config);
  ~StudyServer();
  StudyServer(const StudyServer&) = delete;
  StudyServer& operator=(const StudyServer&) = delete;

  // Binds the socket and returns the bound port.
  int bind();
  // Serves until stop(); call bind() first.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::string current_timestamp();

}  // namespace lineup::study
