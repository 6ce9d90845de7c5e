#include "bop2te/store.hpp"

#include <sqlite3.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <random>

namespace bop2te {

namespace {

class Statement {
 public:
  Statement(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
      throw std::runtime_error(std::string("sqlite prepare: ") + sqlite3_errmsg(db));
    }
  }
  ~Statement() { sqlite3_finalize(stmt_); }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;

  Statement& bind(int i, const std::string& v) {
    sqlite3_bind_text(stmt_, i, v.c_str(), static_cast<int>(v.size()), SQLITE_TRANSIENT);
    return *this;
  }
  Statement& bind(int i, int v) {
    sqlite3_bind_int(stmt_, i, v);
    return *this;
  }
  Statement& bind_null(int i) {
    sqlite3_bind_null(stmt_, i);
    return *this;
  }
  // True while rows remain.
  bool step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw std::runtime_error(std::string("sqlite step: ") + sqlite3_errmsg(db_));
  }
  std::string text(int col) const {
    const auto* p = sqlite3_column_text(stmt_, col);
    return p ? reinterpret_cast<const char*>(p) : "";
  }
  bool is_null(int col) const { return sqlite3_column_type(stmt_, col) == SQLITE_NULL; }
  int integer(int col) const { return sqlite3_column_int(stmt_, col); }

 private:
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

std::string new_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
  return std::string("d") + buf;
}

}  // namespace

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

std::string default_store_path() {
  if (const char* env = std::getenv("BOP2TE_STORE"); env && *env) return env;
  return "bop2te.db";
}

Json DesignDocument::to_json() const {
  Json j = {{"id", id},
            {"spec", bop2te::to_json(spec)},
            {"spec_hash", spec_hash},
            {"result", result ? bop2te::to_json(*result) : Json(nullptr)},
            {"created", created},
            {"updated", updated},
            {"annotation", annotation}};
  if (result) j["result_hash"] = content_hash(j["result"]);
  return j;
}

Json DecisionLogEntry::to_json() const {
  return {{"document_id", document_id},
          {"n", n},
          {"responses", responses},
          {"toxicities", toxicities},
          {"record", record_json},
          {"timestamp", timestamp}};
}

DesignStore::DesignStore(const std::string& path) : path_(path) {
  if (sqlite3_open_v2(path.c_str(), &db_, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX,
                      nullptr) != SQLITE_OK) {
    const std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    throw std::runtime_error("cannot open store " + path + ": " + msg);
  }
  sqlite3_busy_timeout(db_, 5000);
  exec("PRAGMA journal_mode=WAL");
  exec("PRAGMA synchronous=NORMAL");
  exec("PRAGMA foreign_keys=ON");
  exec(
      "CREATE TABLE IF NOT EXISTS designs ("
      " id TEXT PRIMARY KEY,"
      " spec TEXT NOT NULL,"
      " spec_hash TEXT NOT NULL,"
      " result TEXT,"
      " result_spec_hash TEXT,"
      " annotation TEXT NOT NULL DEFAULT '',"
      " created TEXT NOT NULL,"
      " updated TEXT NOT NULL)");
  exec(
      "CREATE TABLE IF NOT EXISTS decisions ("
      " seq INTEGER PRIMARY KEY AUTOINCREMENT,"
      " design_id TEXT NOT NULL REFERENCES designs(id),"
      " n INTEGER NOT NULL,"
      " responses INTEGER NOT NULL,"
      " toxicities INTEGER NOT NULL,"
      " record TEXT NOT NULL,"
      " timestamp TEXT NOT NULL)");
  exec("CREATE INDEX IF NOT EXISTS decisions_by_design ON decisions(design_id, seq)");
}

DesignStore::~DesignStore() { sqlite3_close(db_); }

void DesignStore::exec(const char* sql) const {
  char* err = nullptr;
  if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "unknown error";
    sqlite3_free(err);
    throw std::runtime_error("sqlite: " + msg);
  }
}

std::string DesignStore::create(const DesignSpec& spec, const std::string& annotation) {
  spec.validate();
  const Json spec_json = to_json(spec);
  const std::string now = utc_timestamp();
  const std::string id = new_id();
  std::lock_guard<std::mutex> lock(mutex_);
  Statement st(db_,
               "INSERT INTO designs(id, spec, spec_hash, annotation, created, updated) "
               "VALUES(?, ?, ?, ?, ?, ?)");
  st.bind(1, id).bind(2, spec_json.dump()).bind(3, content_hash(spec_json)).bind(4, annotation)
      .bind(5, now).bind(6, now);
  st.step();
  return id;
}

void DesignStore::attach_result(const std::string& id, const OptimizationResult& result) {
  std::lock_guard<std::mutex> lock(mutex_);
  std::string spec_hash;
  {
    Statement st(db_, "SELECT spec_hash FROM designs WHERE id = ?");
    st.bind(1, id);
    if (!st.step()) throw NotFoundError("unknown design " + id);
    spec_hash = st.text(0);
  }
  Statement st(db_, "UPDATE designs SET result = ?, result_spec_hash = ?, updated = ? WHERE id = ?");
  st.bind(1, to_json(result).dump()).bind(2, spec_hash).bind(3, utc_timestamp()).bind(4, id);
  st.step();
}

bool DesignStore::exists(const std::string& id) const {
  std::lock_guard<std::mutex> lock(mutex_);
  Statement st(db_, "SELECT 1 FROM designs WHERE id = ?");
  st.bind(1, id);
  return st.step();
}

DesignDocument DesignStore::load(const std::string& id) const {
  std::lock_guard<std::mutex> lock(mutex_);
  Statement st(db_,
               "SELECT spec, spec_hash, result, result_spec_hash, annotation, created, updated "
               "FROM designs WHERE id = ?");
  st.bind(1, id);
  if (!st.step()) throw NotFoundError("unknown design " + id);
  DesignDocument doc;
  doc.id = id;
  doc.spec = design_spec_from_json(Json::parse(st.text(0)));
  doc.spec_hash = st.text(1);
  if (!st.is_null(2)) {
    doc.result = optimization_result_from_json(Json::parse(st.text(2)), doc.spec);
    doc.result_spec_hash = st.text(3);
    if (doc.result_spec_hash != doc.spec_hash) {
      throw std::runtime_error("stored result of " + id + " does not belong to its spec");
    }
  }
  doc.annotation = st.text(4);
  doc.created = st.text(5);
  doc.updated = st.text(6);
  return doc;
}

DecisionLogEntry DesignStore::append_decision(const std::string& id, const DecisionRecord& record) {
  std::lock_guard<std::mutex> lock(mutex_);
  exec("BEGIN IMMEDIATE");
  try {
    {
      Statement st(db_, "SELECT 1 FROM designs WHERE id = ?");
      st.bind(1, id);
      if (!st.step()) throw NotFoundError("unknown design " + id);
    }
    {
      Statement st(db_, "SELECT MAX(n) FROM decisions WHERE design_id = ?");
      st.bind(1, id);
      if (st.step() && !st.is_null(0) && record.n < st.integer(0)) {
        throw ConflictError("look n = " + std::to_string(record.n) +
                            " precedes the last logged look n = " + std::to_string(st.integer(0)));
      }
    }
    DecisionLogEntry e;
    e.document_id = id;
    e.n = record.n;
    e.responses = record.responses;
    e.toxicities = record.toxicities;
    e.record = record;
    e.record_json = to_json(record);
    e.timestamp = utc_timestamp();
    Statement st(db_,
                 "INSERT INTO decisions(design_id, n, responses, toxicities, record, timestamp) "
                 "VALUES(?, ?, ?, ?, ?, ?)");
    st.bind(1, id).bind(2, e.n).bind(3, e.responses).bind(4, e.toxicities)
        .bind(5, e.record_json.dump()).bind(6, e.timestamp);
    st.step();
    exec("COMMIT");
    return e;
  } catch (...) {
    exec("ROLLBACK");
    throw;
  }
}

std::vector<DecisionLogEntry> DesignStore::decisions(const std::string& id) const {
  std::lock_guard<std::mutex> lock(mutex_);
  {
    Statement st(db_, "SELECT 1 FROM designs WHERE id = ?");
    st.bind(1, id);
    if (!st.step()) throw NotFoundError("unknown design " + id);
  }
  Statement st(db_,
               "SELECT n, responses, toxicities, record, timestamp FROM decisions "
               "WHERE design_id = ? ORDER BY seq");
  st.bind(1, id);
  std::vector<DecisionLogEntry> out;
  while (st.step()) {
    DecisionLogEntry e;
    e.document_id = id;
    e.n = st.integer(0);
    e.responses = st.integer(1);
    e.toxicities = st.integer(2);
    e.record_json = Json::parse(st.text(3));
    e.record.n = e.n;
    e.record.responses = e.responses;
    e.record.toxicities = e.toxicities;
    e.record.go = e.record_json.value("decision", "") == "go";
    e.timestamp = st.text(4);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace bop2te
