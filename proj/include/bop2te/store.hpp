#pragma once

#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bop2te/json_io.hpp"

struct sqlite3;

namespace bop2te {

class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A request that conflicts with stored state (e.g. a decision logged out of
// schedule order).
class ConflictError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DesignDocument {
  std::string id;
  DesignSpec spec;
  std::string spec_hash;
  std::optional<OptimizationResult> result;
  std::string result_spec_hash;
  std::string created;
  std::string updated;
  std::string annotation;

  Json to_json() const;
};

struct DecisionLogEntry {
  std::string document_id;
  int n = 0;
  int responses = 0;
  int toxicities = 0;
  DecisionRecord record;
  Json record_json;
  std::string timestamp;

  Json to_json() const;
};

// Design documents and decision logs in a single SQLite file (WAL journal).
// All methods are safe to call from several threads.
class DesignStore {
 public:
  explicit DesignStore(const std::string& path);
  ~DesignStore();
  DesignStore(const DesignStore&) = delete;
  DesignStore& operator=(const DesignStore&) = delete;

  std::string create(const DesignSpec& spec, const std::string& annotation = "");
  void attach_result(const std::string& id, const OptimizationResult& result);
  DesignDocument load(const std::string& id) const;
  bool exists(const std::string& id) const;

  // Appends atomically; throws ConflictError if n is below the last logged n.
  DecisionLogEntry append_decision(const std::string& id, const DecisionRecord& record);
  std::vector<DecisionLogEntry> decisions(const std::string& id) const;

  const std::string& path() const { return path_; }

 private:
  void exec(const char* sql) const;

  std::string path_;
  sqlite3* db_ = nullptr;
  mutable std::mutex mutex_;
};

// Store path from BOP2TE_STORE, else ./bop2te.db.
std::string default_store_path();

std::string utc_timestamp();

}  // namespace bop2te
