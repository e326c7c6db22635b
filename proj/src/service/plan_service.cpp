#include <cstdio>
#include <ctime>
#include <iostream>

#include "fairnav/service.hpp"
#include "json_util.hpp"

namespace fairnav::service {

namespace {

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string content_id(std::string_view text) {
  std::uint64_t hash = 1469598103934665603ull;  // FNV-1a
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "city-%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string job_name(std::uint64_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "job-%06llu", static_cast<unsigned long long>(n));
  return buf;
}

}  // namespace

PlanService::PlanService(ServiceConfig config) : config_(std::move(config)), store_(config_.data_dir) {
  Store::Snapshot snapshot = store_.load();
  next_job_ = snapshot.next_job;
  for (auto& [id, doc] : snapshot.cities) {
    cities_.emplace(id, std::make_shared<const CityMap>(parse_city(doc.dump())));
    city_documents_.emplace(id, std::move(doc));
  }
  bool changed = false;
  for (auto& job : snapshot.jobs) {
    if (job.status == JobStatus::Running) {
      job.status = JobStatus::Failed;
      job.error = "interrupted by a service restart";
      job.finished_at = utc_now();
      changed = true;
    }
    if (job.status == JobStatus::Queued) queue_.push_back(job.id);
    const std::string id = job.id;
    jobs_.emplace(id, std::move(job));
  }
  if (changed) persist_locked();

  const int workers = std::max(1, config_.workers);
  for (int i = 0; i < workers; ++i) workers_.emplace_back([this] { worker_loop(); });
}

PlanService::~PlanService() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  changed_.notify_all();
  for (auto& t : workers_) t.join();
}

std::string PlanService::add_city(std::string_view city_file) {
  const Json doc = detail::parse_document(city_file);
  if (doc.is_object()) {
    auto side = [&](const char* key) {
      auto it = doc.find(key);
      return it != doc.end() && it->is_number_integer() ? it->get<std::int64_t>() : 0;
    };
    if (side("width") > kMaxCitySide || side("height") > kMaxCitySide) {
      throw PayloadTooLargeError("cities are limited to " + std::to_string(kMaxCitySide) + "x" +
                                 std::to_string(kMaxCitySide) + " cells");
    }
  }
  auto city = std::make_shared<const CityMap>(parse_city(city_file));
  const std::string canonical = save_city(*city);
  const std::string id = content_id(canonical);

  std::lock_guard lock(mutex_);
  if (cities_.count(id)) return id;
  cities_.emplace(id, std::move(city));
  city_documents_.emplace(id, Json::parse(canonical));
  persist_locked();
  return id;
}

std::shared_ptr<const CityMap> PlanService::city_locked(const std::string& city_id) const {
  auto it = cities_.find(city_id);
  if (it == cities_.end()) throw NotFoundError("unknown city '" + city_id + "'");
  return it->second;
}

std::string PlanService::city_file(const std::string& city_id) const {
  std::lock_guard lock(mutex_);
  return save_city(*city_locked(city_id));
}

GroupDistribution PlanService::distribution(const std::string& city_id,
                                            const std::string& attribute) const {
  std::shared_ptr<const CityMap> city;
  {
    std::lock_guard lock(mutex_);
    city = city_locked(city_id);
  }
  return city_distribution(*city, attribute);
}

PlanJob& PlanService::job_locked(const std::string& job_id) {
  auto it = jobs_.find(job_id);
  if (it == jobs_.end()) throw NotFoundError("unknown job '" + job_id + "'");
  return it->second;
}

const PlanJob& PlanService::job_locked(const std::string& job_id) const {
  auto it = jobs_.find(job_id);
  if (it == jobs_.end()) throw NotFoundError("unknown job '" + job_id + "'");
  return it->second;
}

std::string PlanService::enqueue_locked(PlanJob job) {
  job.id = job_name(next_job_++);
  job.status = JobStatus::Queued;
  job.created_at = utc_now();
  const std::string id = job.id;
  jobs_.emplace(id, std::move(job));
  queue_.push_back(id);
  persist_locked();
  changed_.notify_all();
  return id;
}

std::string PlanService::submit(const std::string& city_id, const FairnessSpec& spec,
                                const PlannerParams& params) {
  std::unique_lock lock(mutex_);
  auto city = city_locked(city_id);
  lock.unlock();
  validate_params(params);
  validate_spec(*city, spec);
  if (params.sensor_radius < 0) throw ValidationError("sensor_radius must be non-negative");

  PlanJob job;
  job.city_id = city_id;
  job.spec = spec;
  job.params = params;
  lock.lock();
  return enqueue_locked(std::move(job));
}

std::string PlanService::refine(const std::string& job_id, const std::vector<Coord>& waypoints) {
  std::unique_lock lock(mutex_);
  const PlanJob& parent = job_locked(job_id);
  if (parent.status != JobStatus::Done) {
    throw ConflictError("job '" + job_id + "' is " + std::string(to_string(parent.status)) +
                        "; only finished jobs can be refined");
  }
  PlanJob job;
  job.city_id = parent.city_id;
  job.spec = parent.spec;
  job.params = parent.params;
  job.parent_id = parent.id;
  job.waypoints = waypoints;
  auto city = city_locked(parent.city_id);
  lock.unlock();
  // Reject unreachable pins now rather than in a failed job.
  TourDecoder check(*city, job.params.budget, waypoints);
  lock.lock();
  return enqueue_locked(std::move(job));
}

PlanJob PlanService::job(const std::string& job_id) const {
  std::lock_guard lock(mutex_);
  return job_locked(job_id);
}

std::pair<PathAudit, std::vector<std::string>> PlanService::audit(const std::string& job_id,
                                                                  std::size_t k) const {
  std::unique_lock lock(mutex_);
  const PlanJob& job = job_locked(job_id);
  if (job.status != JobStatus::Done || !job.result) {
    throw ConflictError("job '" + job_id + "' has no result yet");
  }
  if (k >= job.result->solutions.size()) {
    throw NotFoundError("job '" + job_id + "' has " + std::to_string(job.result->solutions.size()) +
                        " solutions, no solution " + std::to_string(k));
  }
  const Solution solution = job.result->solutions[k];
  const FairnessSpec spec = job.spec;
  const int radius = job.params.sensor_radius;
  auto city = city_locked(job.city_id);
  lock.unlock();

  const std::size_t a = efficiency_attribute(*city, spec);
  const std::string& attribute = city->attributes()[a].name;
  PathAudit result = path_audit(*city, solution.path, attribute, radius);
  result.unfairness = unfairness(*city, solution.path, spec, radius);
  return {std::move(result), city->attributes()[a].categories};
}

bool PlanService::wait(const std::string& job_id, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mutex_);
  return changed_.wait_for(lock, timeout, [&] {
    const PlanJob& job = job_locked(job_id);
    return job.status == JobStatus::Done || job.status == JobStatus::Failed;
  });
}

void PlanService::persist_locked() {
  if (!store_.persistent()) return;
  Store::Snapshot snapshot;
  snapshot.next_job = next_job_;
  snapshot.cities = city_documents_;
  for (const auto& [id, job] : jobs_) snapshot.jobs.push_back(job);
  store_.save(snapshot);
}

void PlanService::worker_loop() {
  for (;;) {
    std::string id;
    {
      std::unique_lock lock(mutex_);
      changed_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      id = queue_.front();
      queue_.pop_front();
      jobs_.at(id).status = JobStatus::Running;
      persist_locked();
    }
    run(id);
  }
}

void PlanService::run(const std::string& job_id) {
  PlanJob job;
  std::shared_ptr<const CityMap> city;
  std::optional<ParetoFront> parent_front;
  {
    std::lock_guard lock(mutex_);
    job = jobs_.at(job_id);
    city = cities_.at(job.city_id);
    if (!job.parent_id.empty()) parent_front = jobs_.at(job.parent_id).result;
  }

  std::optional<ParetoFront> front;
  std::string error;
  try {
    if (job.parent_id.empty()) {
      front = evolve_pareto(*city, job.spec, job.params);
    } else {
      front = fairnav::refine(*city, job.spec, job.params, job.waypoints,
                              parent_front.value_or(ParetoFront{}));
    }
  } catch (const std::exception& e) {
    error = e.what();
  }

  std::lock_guard lock(mutex_);
  PlanJob& stored = jobs_.at(job_id);
  stored.finished_at = utc_now();
  if (front) {
    stored.status = JobStatus::Done;
    stored.result = std::move(front);
  } else {
    stored.status = JobStatus::Failed;
    stored.error = error;
  }
  try {
    persist_locked();
  } catch (const std::exception& e) {
    std::cerr << "fairnav: failed to persist " << job_id << ": " << e.what() << "\n";
  }
  changed_.notify_all();
}

}  // namespace fairnav::service
