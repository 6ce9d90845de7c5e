#include "bop2te/server.hpp"

#include "httplib.h"

namespace bop2te {

const char* job_status_name(JobPool::Status s) {
  switch (s) {
    case JobPool::Status::queued: return "queued";
    case JobPool::Status::running: return "running";
    case JobPool::Status::done: return "done";
    case JobPool::Status::failed: return "failed";
  }
  return "unknown";
}

std::pair<int, Json> error_response(const std::exception& e) {
  if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
    return {400, {{"error", "validation"}, {"field", v->field()}, {"message", v->what()}}};
  }
  if (dynamic_cast<const Json::exception*>(&e) || dynamic_cast<const std::invalid_argument*>(&e) ||
      dynamic_cast<const std::domain_error*>(&e)) {
    return {400, {{"error", "validation"}, {"message", e.what()}}};
  }
  if (dynamic_cast<const NotFoundError*>(&e)) return {404, {{"error", "not_found"}, {"message", e.what()}}};
  if (dynamic_cast<const ConflictError*>(&e)) return {409, {{"error", "conflict"}, {"message", e.what()}}};
  return {500, {{"error", "internal"}, {"message", e.what()}}};
}

JobPool::JobPool(unsigned workers) {
  if (workers == 0) workers = 1;
  for (unsigned i = 0; i < workers; ++i) threads_.emplace_back([this] { run(); });
}

JobPool::~JobPool() {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    stopping_ = true;
  }
  cv_.notify_all();
  for (auto& t : threads_) t.join();
}

std::string JobPool::submit(std::function<Json()> task) {
  std::lock_guard<std::mutex> lock(mutex_);
  const std::string id = "j" + std::to_string(next_++);
  jobs_[id].id = id;
  queue_.emplace_back(id, std::move(task));
  cv_.notify_one();
  return id;
}

std::optional<JobPool::Job> JobPool::get(const std::string& id) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) return std::nullopt;
  return it->second;
}

void JobPool::run() {
  for (;;) {
    std::pair<std::string, std::function<Json()>> item;
    {
      std::unique_lock<std::mutex> lock(mutex_);
      cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (stopping_ && queue_.empty()) return;
      item = std::move(queue_.front());
      queue_.pop_front();
      jobs_[item.first].status = Status::running;
    }
    Job finished;
    finished.id = item.first;
    try {
      finished.result = item.second();
      finished.status = Status::done;
    } catch (const std::exception& e) {
      auto [code, body] = error_response(e);
      finished.status = Status::failed;
      finished.error = body.value("message", "");
      finished.error_code = code;
    }
    std::lock_guard<std::mutex> lock(mutex_);
    jobs_[item.first] = std::move(finished);
  }
}

namespace {

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

Json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return Json(nullptr);
  try {
    return Json::parse(req.body);
  } catch (const Json::parse_error& e) {
    throw ValidationError("body", std::string("malformed JSON: ") + e.what());
  }
}

int int_field(const Json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end() || !it->is_number_integer()) throw ValidationError(name, "required integer");
  return it->get<int>();
}

Json create_design(DesignStore& store, const DesignRequest& req) {
  const OptimizationResult result = run_design(req);
  const std::string id = store.create(req.spec, req.annotation);
  store.attach_result(id, result);
  return store.load(id).to_json();
}

}  // namespace

ApiServer::ApiServer(DesignStore& store, ServerOptions options)
    : store_(store), options_(std::move(options)), jobs_(options_.job_workers),
      http_(std::make_unique<httplib::Server>()) {
  routes();
}

ApiServer::~ApiServer() { stop(); }

bool ApiServer::listen() { return http_->listen(options_.host, options_.port); }

int ApiServer::bind_any_port() { return http_->bind_to_any_port(options_.host); }

bool ApiServer::listen_after_bind() { return http_->listen_after_bind(); }

void ApiServer::stop() {
  if (http_) http_->stop();
}

bool ApiServer::running() const { return http_->is_running(); }

void ApiServer::routes() {
  auto& s = *http_;

  s.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      auto [code, body] = error_response(e);
      send_json(res, code, body);
    } catch (...) {
      send_json(res, 500, {{"error", "internal"}, {"message", "unknown error"}});
    }
  });

  s.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, {{"status", "ok"}});
  });

  s.Post("/designs", [this](const httplib::Request& req, httplib::Response& res) {
    const Json body = parse_body(req);
    const DesignRequest dreq = design_request_from_json(body);
    const bool async = (body.is_object() && body.value("async", false)) ||
                       (req.has_param("async") && req.get_param_value("async") != "0");
    if (!async) {
      send_json(res, 200, create_design(store_, dreq));
      return;
    }
    const std::string job = jobs_.submit([this, dreq] { return create_design(store_, dreq); });
    send_json(res, 202, {{"job_id", job}, {"status", "queued"}, {"href", "/jobs/" + job}});
  });

  s.Get(R"(/jobs/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    const auto job = jobs_.get(req.matches[1]);
    if (!job) throw NotFoundError("unknown job " + std::string(req.matches[1]));
    Json body = {{"job_id", job->id}, {"status", job_status_name(job->status)}};
    if (job->status == JobPool::Status::done) {
      body["design_id"] = job->result.value("id", "");
      body["result"] = job->result;
    }
    if (job->status == JobPool::Status::failed) {
      body["error"] = job->error;
      body["error_code"] = job->error_code;
    }
    send_json(res, 200, body);
  });

  s.Get(R"(/designs/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, store_.load(req.matches[1]).to_json());
  });

  s.Post(R"(/designs/([^/]+)/oc)", [this](const httplib::Request& req, httplib::Response& res) {
    const DesignDocument doc = store_.load(req.matches[1]);
    if (!doc.result) throw ConflictError("design " + doc.id + " has no stopping boundaries yet");
    send_json(res, 200, oc_report(doc.spec, doc.result->boundaries, oc_request_from_json(parse_body(req))));
  });

  s.Post(R"(/designs/([^/]+)/decisions)", [this](const httplib::Request& req, httplib::Response& res) {
    const Json body = parse_body(req);
    if (!body.is_object()) throw ValidationError("body", "expected a JSON object");
    InterimData data;
    data.n = int_field(body, "n");
    data.responses = int_field(body, "responses");
    data.toxicities = int_field(body, "toxicities");
    const DecisionLogEntry e = record_decision(store_, req.matches[1], data);
    Json out = e.record_json;
    out["document_id"] = e.document_id;
    out["timestamp"] = e.timestamp;
    send_json(res, 200, out);
  });

  s.Get(R"(/designs/([^/]+)/decisions)", [this](const httplib::Request& req, httplib::Response& res) {
    Json list = Json::array();
    for (const auto& e : store_.decisions(req.matches[1])) list.push_back(e.to_json());
    send_json(res, 200, {{"document_id", std::string(req.matches[1])}, {"decisions", list}});
  });

  s.Get(R"(/designs/([^/]+)/protocol)", [this](const httplib::Request& req, httplib::Response& res) {
    const DesignDocument doc = store_.load(req.matches[1]);
    send_json(res, 200, {{"document_id", doc.id}, {"text", render_protocol(doc)}});
  });

  s.Post("/simulations/multidose", [](const httplib::Request& req, httplib::Response& res) {
    const MultiDoseRequest mreq = multidose_request_from_json(parse_body(req));
    send_json(res, 200, to_json(run_multidose(mreq)));
  });
}

}  // namespace bop2te
