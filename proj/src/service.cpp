#include "hasfc/service.hpp"

#include <fmt/format.h>
#include <httplib.h>

#include "hasfc/optimizer.hpp"
#include "hasfc/result_json.hpp"

namespace hasfc {

using nlohmann::ordered_json;

std::optional<std::string> ResultCache::lookup(const RequestKey& key) {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  order_.splice(order_.begin(), order_, it->second);
  return it->second->second;
}

void ResultCache::store(const RequestKey& key, std::string body) {
  if (capacity_ == 0) return;
  if (auto it = index_.find(key); it != index_.end()) {
    it->second->second = std::move(body);
    order_.splice(order_.begin(), order_, it->second);
    return;
  }
  order_.emplace_front(key, std::move(body));
  index_.emplace(key, order_.begin());
  if (index_.size() > capacity_) {
    index_.erase(order_.back().first);
    order_.pop_back();
  }
}

const char* job_status_name(JobStatus status) {
  switch (status) {
    case JobStatus::kPending: return "pending";
    case JobStatus::kRunning: return "running";
    case JobStatus::kDone: return "done";
    case JobStatus::kFailed: return "failed";
  }
  return "?";
}

Service::Service(ServiceConfig config)
    : config_(config), cache_(config.cache_capacity), id_rng_(std::random_device{}()) {
  int n = config_.workers;
  if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  for (int i = 0; i < n; ++i) workers_.emplace_back([this] { worker_loop(); });
}

Service::~Service() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  wake_.notify_all();
  for (auto& t : workers_) t.join();
}

std::string Service::next_id() {
  // Caller holds mutex_.
  return fmt::format("{:016x}{:016x}", id_rng_(), id_rng_());
}

std::string Service::job_body(const JobRecord& job) {
  ordered_json body{{"request_id", job.request_id}, {"status", job_status_name(job.status)}};
  if (job.error) body["error"] = *job.error;
  return body.dump();
}

HttpReply Service::submit(const std::string& body) {
  ValidationOutcome outcome = validate_request_text(body);
  if (!outcome.ok()) return {400, errors_to_json(outcome.errors).dump()};

  RequestKey key = canonical_request_key(*outcome.request);
  std::lock_guard lock(mutex_);
  if (auto cached = cache_.lookup(key)) return {200, *cached};
  if (queue_.size() >= config_.queue_limit) {
    return {503, ordered_json{{"error", "job queue is full"}}.dump()};
  }
  JobRecord job;
  job.request_id = next_id();
  job.submitted_at = std::chrono::system_clock::now();
  job.cache_key = std::move(key);
  job.request = std::move(*outcome.request);
  std::string reply = job_body(job);
  queue_.push_back(job.request_id);
  jobs_.emplace(job.request_id, std::move(job));
  wake_.notify_one();
  return {202, std::move(reply)};
}

HttpReply Service::poll(const std::string& request_id) {
  std::lock_guard lock(mutex_);
  auto it = jobs_.find(request_id);
  if (it == jobs_.end()) {
    return {404, ordered_json{{"error", "unknown request_id"}}.dump()};
  }
  const JobRecord& job = it->second;
  if (job.done_body) return {200, *job.done_body};
  return {200, job_body(job)};
}

std::size_t Service::executions() const {
  std::lock_guard lock(mutex_);
  return executions_;
}

std::optional<JobStatus> Service::status(const std::string& request_id) const {
  std::lock_guard lock(mutex_);
  auto it = jobs_.find(request_id);
  if (it == jobs_.end()) return std::nullopt;
  return it->second.status;
}

void Service::worker_loop() {
  for (;;) {
    std::string id;
    OptimizationRequest request;
    {
      std::unique_lock lock(mutex_);
      wake_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      id = std::move(queue_.front());
      queue_.pop_front();
      JobRecord& job = jobs_.at(id);
      job.status = JobStatus::kRunning;
      request = job.request;
      ++executions_;
    }

    std::optional<std::string> result_body;
    std::string error;
    try {
      ordered_json result = result_to_json(request, optimize(request));
      result_body = ordered_json{{"request_id", id}, {"status", "done"}, {"result", std::move(result)}}
                        .dump();
    } catch (const std::exception& e) {
      error = e.what();
    }

    std::lock_guard lock(mutex_);
    JobRecord& job = jobs_.at(id);
    job.completed_at = std::chrono::system_clock::now();
    if (result_body) {
      job.status = JobStatus::kDone;
      job.done_body = *result_body;
      cache_.store(job.cache_key, std::move(*result_body));
    } else {
      job.status = JobStatus::kFailed;
      job.error = std::move(error);
    }
  }
}

void Service::attach(httplib::Server& server) {
  server.Post("/v1/chains", [this](const httplib::Request& req, httplib::Response& res) {
    HttpReply reply = submit(req.body);
    res.status = reply.status;
    res.set_content(reply.body, "application/json");
  });
  server.Get(R"(/v1/chains/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    HttpReply reply = poll(req.matches[1]);
    res.status = reply.status;
    res.set_content(reply.body, "application/json");
  });
}

}  // namespace hasfc
