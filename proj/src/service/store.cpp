#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fairnav/service.hpp"
#include "json_util.hpp"

namespace fairnav::service {

namespace {
constexpr std::string_view kStoreFormat = "fairnav-store/1";
constexpr const char* kStoreFile = "fairnav-store.json";
}  // namespace

int http_status(const std::exception& e) {
  if (dynamic_cast<const NotFoundError*>(&e)) return 404;
  if (dynamic_cast<const ConflictError*>(&e)) return 409;
  if (dynamic_cast<const PayloadTooLargeError*>(&e)) return 413;
  if (dynamic_cast<const MismatchError*>(&e) || dynamic_cast<const InfeasibleError*>(&e) ||
      dynamic_cast<const UnsupportedSpecError*>(&e)) {
    return 422;
  }
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const ValidationError*>(&e)) return 400;
  return 500;
}

std::string_view to_string(JobStatus status) {
  switch (status) {
    case JobStatus::Queued: return "queued";
    case JobStatus::Running: return "running";
    case JobStatus::Done: return "done";
    case JobStatus::Failed: return "failed";
  }
  return "unknown";
}

JobStatus parse_job_status(std::string_view text) {
  for (JobStatus s : {JobStatus::Queued, JobStatus::Running, JobStatus::Done, JobStatus::Failed}) {
    if (to_string(s) == text) return s;
  }
  throw ParseError("status: unknown job status '" + std::string(text) + "'");
}

Json to_json(const PlanJob& job) {
  Json j;
  j["job_id"] = job.id;
  j["city_id"] = job.city_id;
  j["status"] = to_string(job.status);
  j["spec"] = to_json(job.spec);
  j["params"] = to_json(job.params);
  if (!job.parent_id.empty()) {
    j["parent_job_id"] = job.parent_id;
    Json waypoints = Json::array();
    for (Coord c : job.waypoints) waypoints.push_back(detail::coord_json(c));
    j["waypoints"] = std::move(waypoints);
  }
  j["created_at"] = job.created_at;
  if (!job.finished_at.empty()) j["finished_at"] = job.finished_at;
  if (job.status == JobStatus::Failed) j["error"] = job.error;
  if (job.result) j["front"] = front_document(job.spec, to_json(job.params), *job.result);
  return j;
}

PlanJob job_from_json(const Json& j) {
  PlanJob job;
  job.id = detail::as_string(detail::field(j, "job_id", "job"), "job.job_id");
  job.city_id = detail::as_string(detail::field(j, "city_id", "job"), "job.city_id");
  job.status = parse_job_status(detail::as_string(detail::field(j, "status", "job"), "job.status"));
  job.spec = spec_from_json(detail::field(j, "spec", "job"));
  job.params = params_from_json(detail::field(j, "params", "job"));
  if (const Json* parent = detail::optional_field(j, "parent_job_id")) {
    job.parent_id = detail::as_string(*parent, "job.parent_job_id");
  }
  if (const Json* w = detail::optional_field(j, "waypoints")) job.waypoints = waypoints_from_json(*w, "job.waypoints");
  job.created_at = detail::as_string(detail::field(j, "created_at", "job"), "job.created_at");
  if (const Json* f = detail::optional_field(j, "finished_at")) job.finished_at = detail::as_string(*f, "job.finished_at");
  if (const Json* e = detail::optional_field(j, "error")) job.error = detail::as_string(*e, "job.error");
  if (const Json* front = detail::optional_field(j, "front")) {
    job.result = parse_front_document(front->dump()).front;
  }
  return job;
}

ServiceConfig config_from_env() {
  ServiceConfig config;
  if (const char* port = std::getenv("FAIRNAV_PORT")) config.port = std::atoi(port);
  if (const char* dir = std::getenv("FAIRNAV_DATA_DIR")) config.data_dir = dir;
  if (const char* workers = std::getenv("FAIRNAV_WORKERS")) config.workers = std::max(1, std::atoi(workers));
  if (const char* origin = std::getenv("FAIRNAV_CORS_ORIGIN")) config.cors_origin = origin;
  return config;
}

Store::Store(std::filesystem::path data_dir) {
  if (data_dir.empty()) return;
  std::filesystem::create_directories(data_dir);
  file_ = data_dir / kStoreFile;
}

Store::Snapshot Store::load() const {
  Snapshot snapshot;
  if (file_.empty() || !std::filesystem::exists(file_)) return snapshot;
  std::ifstream in(file_, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const Json doc = detail::parse_document(buffer.str());
  if (detail::as_string(detail::field(doc, "format", "store"), "store.format") != kStoreFormat) {
    throw ParseError("store.format: expected \"" + std::string(kStoreFormat) + "\"");
  }
  snapshot.next_job = static_cast<std::uint64_t>(detail::as_int(detail::field(doc, "next_job", "store"), "store.next_job"));
  const Json& cities = detail::field(doc, "cities", "store");
  if (!cities.is_object()) throw ParseError("store.cities: expected an object");
  for (auto it = cities.begin(); it != cities.end(); ++it) snapshot.cities.emplace(it.key(), it.value());
  for (const auto& j : detail::as_array(detail::field(doc, "jobs", "store"), "store.jobs")) {
    snapshot.jobs.push_back(job_from_json(j));
  }
  return snapshot;
}

void Store::save(const Snapshot& snapshot) const {
  if (file_.empty()) return;
  Json doc;
  doc["format"] = kStoreFormat;
  doc["next_job"] = snapshot.next_job;
  Json cities = Json::object();
  for (const auto& [id, city] : snapshot.cities) cities[id] = city;
  doc["cities"] = std::move(cities);
  Json jobs = Json::array();
  for (const auto& job : snapshot.jobs) jobs.push_back(to_json(job));
  doc["jobs"] = std::move(jobs);

  const auto tmp = std::filesystem::path(file_.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << doc.dump();
    out.flush();
    if (!out) throw Error("cannot write store file " + tmp.string());
  }
  std::filesystem::rename(tmp, file_);
}

}  // namespace fairnav::service
