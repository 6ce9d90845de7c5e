#pragma once

#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "bop2te/service.hpp"

namespace httplib {
class Server;
}

namespace bop2te {

// Fixed set of worker threads running design jobs in submission order.
class JobPool {
 public:
  enum class Status { queued, running, done, failed };

  struct Job {
    std::string id;
    Status status = Status::queued;
    Json result;
    std::string error;
    int error_code = 0;
  };

  explicit JobPool(unsigned workers);
  ~JobPool();
  JobPool(const JobPool&) = delete;
  JobPool& operator=(const JobPool&) = delete;

  // The task returns the JSON stored as the job result.
  std::string submit(std::function<Json()> task);
  std::optional<Job> get(const std::string& id) const;

 private:
  void run();

  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<std::pair<std::string, std::function<Json()>>> queue_;
  std::map<std::string, Job> jobs_;
  std::vector<std::thread> threads_;
  std::uint64_t next_ = 1;
  bool stopping_ = false;
};

const char* job_status_name(JobPool::Status s);

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  unsigned job_workers = 2;
};

class ApiServer {
 public:
  ApiServer(DesignStore& store, ServerOptions options);
  ~ApiServer();

  // Binds and serves until stop(); returns false if the address cannot be bound.
  bool listen();
  // Binds to a free port on host; returns it. Serve with listen_after_bind().
  int bind_any_port();
  bool listen_after_bind();
  void stop();
  bool running() const;

 private:
  void routes();

  DesignStore& store_;
  ServerOptions options_;
  JobPool jobs_;
  std::unique_ptr<httplib::Server> http_;
};

// Maps an exception to an HTTP status and a JSON error body.
std::pair<int, Json> error_response(const std::exception& e);

}  // namespace bop2te
