#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "fairnav/citymap.hpp"
#include "fairnav/error.hpp"
#include "fairnav/fairness.hpp"
#include "fairnav/io.hpp"
#include "fairnav/planner.hpp"

namespace fairnav::service {

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class ConflictError : public Error {
 public:
  using Error::Error;
};

class PayloadTooLargeError : public Error {
 public:
  using Error::Error;
};

/// HTTP status for a library or service exception.
int http_status(const std::exception& e);

inline constexpr int kMaxCitySide = 512;

enum class JobStatus { Queued, Running, Done, Failed };

std::string_view to_string(JobStatus status);
JobStatus parse_job_status(std::string_view text);

struct PlanJob {
  std::string id;
  std::string city_id;
  FairnessSpec spec;
  PlannerParams params;
  /// Set for refinement jobs.
  std::string parent_id;
  std::vector<Coord> waypoints;
  JobStatus status = JobStatus::Queued;
  std::optional<ParetoFront> result;
  std::string error;
  std::string created_at;
  std::string finished_at;
};

Json to_json(const PlanJob& job);
PlanJob job_from_json(const Json& j);

struct ServiceConfig {
  /// Directory of the store file; empty keeps everything in memory.
  std::filesystem::path data_dir;
  int workers = 2;
  int port = 8080;
  std::string cors_origin = "*";
};

/// Reads FAIRNAV_PORT, FAIRNAV_DATA_DIR, FAIRNAV_WORKERS and
/// FAIRNAV_CORS_ORIGIN on top of the defaults.
ServiceConfig config_from_env();

/// Single-file persistence of cities and jobs, written atomically.
class Store {
 public:
  struct Snapshot {
    std::map<std::string, Json> cities;
    std::vector<PlanJob> jobs;
    std::uint64_t next_job = 1;
  };

  explicit Store(std::filesystem::path data_dir);

  bool persistent() const { return !file_.empty(); }
  Snapshot load() const;
  void save(const Snapshot& snapshot) const;

 private:
  std::filesystem::path file_;
};

/// Cities, plan jobs and the worker pool behind the HTTP API. Planner runs
/// happen on at most `workers` threads; further jobs wait in FIFO order.
class PlanService {
 public:
  explicit PlanService(ServiceConfig config);
  ~PlanService();

  PlanService(const PlanService&) = delete;
  PlanService& operator=(const PlanService&) = delete;

  /// Returns the city id. Identical cities share an id.
  std::string add_city(std::string_view city_file);
  std::string city_file(const std::string& city_id) const;
  GroupDistribution distribution(const std::string& city_id, const std::string& attribute) const;

  std::string submit(const std::string& city_id, const FairnessSpec& spec, const PlannerParams& params);
  /// New job re-planning through `waypoints`, seeded with the parent's front.
  std::string refine(const std::string& job_id, const std::vector<Coord>& waypoints);

  PlanJob job(const std::string& job_id) const;
  /// Audit of solution `k` of a finished job, with its unfairness.
  std::pair<PathAudit, std::vector<std::string>> audit(const std::string& job_id, std::size_t k) const;

  /// Blocks until the job is done or failed; false on timeout.
  bool wait(const std::string& job_id, std::chrono::milliseconds timeout) const;

  const ServiceConfig& config() const { return config_; }

 private:
  std::shared_ptr<const CityMap> city_locked(const std::string& city_id) const;
  PlanJob& job_locked(const std::string& job_id);
  const PlanJob& job_locked(const std::string& job_id) const;
  std::string enqueue_locked(PlanJob job);
  void persist_locked();
  void worker_loop();
  void run(const std::string& job_id);

  ServiceConfig config_;
  Store store_;

  mutable std::mutex mutex_;
  mutable std::condition_variable changed_;
  std::map<std::string, std::shared_ptr<const CityMap>> cities_;
  std::map<std::string, Json> city_documents_;
  std::map<std::string, PlanJob> jobs_;
  std::deque<std::string> queue_;
  std::uint64_t next_job_ = 1;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

/// HTTP/1.1 front end of a PlanService.
class HttpServer {
 public:
  explicit HttpServer(PlanService& service);
  ~HttpServer();

  /// Binds to an ephemeral port and returns it, or -1.
  int bind_to_any_port(const std::string& host = "127.0.0.1");
  bool bind(const std::string& host, int port);
  /// Serves until stop(); requires a successful bind.
  bool listen_after_bind();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fairnav::service
