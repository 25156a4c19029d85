#pragma once

/// @file service.hpp
/// REST front end for orchestrators. A submitted request is validated,
/// looked up in the result cache and otherwise queued; the caller gets a
/// waiting ID and polls for the result.
///
///   POST /v1/chains        400 errors | 200 cached result | 202 waiting ID
///                          | 503 queue full
///   GET  /v1/chains/{id}   200 job status (+ result or error) | 404
///
/// Jobs and cache live in memory only; a restart forgets both.

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "hasfc/domain.hpp"
#include "hasfc/request_json.hpp"

namespace httplib {
class Server;
}

namespace hasfc {

/// Bounded least-recently-used map from request key to the serialized done
/// body. Capacity 0 disables caching. Not synchronized.
class ResultCache {
 public:
  explicit ResultCache(std::size_t capacity) : capacity_(capacity) {}

  std::optional<std::string> lookup(const RequestKey& key);
  void store(const RequestKey& key, std::string body);

  std::size_t size() const { return index_.size(); }
  std::size_t capacity() const { return capacity_; }

 private:
  using Entry = std::pair<RequestKey, std::string>;
  std::size_t capacity_;
  std::list<Entry> order_;  // most recently used first
  std::unordered_map<RequestKey, std::list<Entry>::iterator> index_;
};

enum class JobStatus { kPending, kRunning, kDone, kFailed };

const char* job_status_name(JobStatus status);

struct JobRecord {
  std::string request_id;
  JobStatus status = JobStatus::kPending;
  std::chrono::system_clock::time_point submitted_at;
  std::optional<std::chrono::system_clock::time_point> completed_at;
  std::optional<std::string> done_body;  // serialized 200 body once done
  std::optional<std::string> error;      // once failed
  RequestKey cache_key{""};
  OptimizationRequest request;
};

struct ServiceConfig {
  int workers = 0;             // 0 = hardware concurrency
  std::size_t queue_limit = 64;
  std::size_t cache_capacity = 128;
};

struct HttpReply {
  int status = 200;
  std::string body;
};

class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  HttpReply submit(const std::string& body);
  HttpReply poll(const std::string& request_id);

  /// Registers the routes on an httplib server.
  void attach(httplib::Server& server);

  /// Optimizer runs started so far (cache hits do not count).
  std::size_t executions() const;
  std::optional<JobStatus> status(const std::string& request_id) const;

 private:
  void worker_loop();
  std::string next_id();
  static std::string job_body(const JobRecord& job);

  ServiceConfig config_;
  mutable std::mutex mutex_;
  std::condition_variable wake_;
  bool stopping_ = false;
  std::deque<std::string> queue_;
  std::unordered_map<std::string, JobRecord> jobs_;
  ResultCache cache_;
  std::mt19937_64 id_rng_;
  std::size_t executions_ = 0;
  std::vector<std::thread> workers_;
};

}  // namespace hasfc
