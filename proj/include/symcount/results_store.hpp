#pragma once

// Append-only JSON-lines cache of exact counts keyed by (n, l).

#include "symcount/counting.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>

namespace symcount {

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct StoreRecord {
  CountValue count;
  std::string timestamp;
};

class ResultsStore {
 public:
  static constexpr const char* env_var = "SYMCOUNT_STORE";
  static constexpr const char* default_path = "symcount_results.jsonl";

  /// An explicit path wins over the environment, which wins over the default.
  static std::filesystem::path resolve_path(const std::optional<std::string>& explicit_path = std::nullopt) {
    if (explicit_path && !explicit_path->empty()) return *explicit_path;
    if (const char* env = std::getenv(env_var); env != nullptr && *env != '\0') return env;
    return default_path;
  }

  explicit ResultsStore(std::filesystem::path path) : path_(std::move(path)) { load(); }

  const std::filesystem::path& path() const { return path_; }

  std::optional<CountValue> find(const Instance& inst) const {
    std::lock_guard lock(mutex_);
    auto it = records_.find(inst);
    if (it == records_.end()) return std::nullopt;
    return it->second.count;
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return records_.size();
  }

  std::vector<StoreRecord> records() const {
    std::lock_guard lock(mutex_);
    std::vector<StoreRecord> out;
    for (const auto& [_, rec] : records_) out.push_back(rec);
    return out;
  }

  /// Returns true if a line was written. An identical value already present
  /// is a no-op; a different one is an inconsistency.
  bool append(const CountValue& cv) {
    std::lock_guard lock(mutex_);
    if (auto it = records_.find(cv.instance); it != records_.end()) {
      check_agrees(it->second.count, cv);
      return false;
    }
    StoreRecord rec{cv, utc_timestamp()};
    std::ofstream os(path_, std::ios::app);
    if (!os) throw Error(ErrorKind::invalid_argument, "cannot open store " + path_.string() + " for append");
    os << to_json(rec).dump() << '\n';
    os.flush();
    if (!os) throw Error(ErrorKind::invalid_argument, "write to store " + path_.string() + " failed");
    records_.emplace(cv.instance, std::move(rec));
    return true;
  }

  static nlohmann::json to_json(const StoreRecord& rec) {
    return {{"n", rec.count.instance.n},
            {"l", rec.count.instance.l},
            {"value", rec.count.value.str()},
            {"method", std::string(to_string(rec.count.method))},
            {"timestamp", rec.timestamp}};
  }

 private:
  static void check_agrees(const CountValue& have, const CountValue& got) {
    if (have.value != got.value)
      throw Error(ErrorKind::inconsistency,
                  "M(" + std::to_string(got.instance.n) + "," + std::to_string(got.instance.l) + "): " +
                      std::string(to_string(have.method)) + " gives " + have.value.str() + ", " +
                      std::string(to_string(got.method)) + " gives " + got.value.str());
  }

  static StoreRecord parse_line(const std::string& line, std::size_t lineno, const std::string& where) {
    auto fail = [&](const std::string& why) {
      return Error(ErrorKind::store_corrupt, where + ":" + std::to_string(lineno) + ": " + why);
    };
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw fail(e.what());
    }
    if (!j.is_object()) throw fail("record is not an object");
    for (const char* key : {"n", "l", "value", "method", "timestamp"})
      if (!j.contains(key)) throw fail(std::string("missing field '") + key + "'");
    if (!j["n"].is_number_integer() || !j["l"].is_number_integer()) throw fail("n and l must be integers");
    if (!j["value"].is_string() || !j["method"].is_string() || !j["timestamp"].is_string())
      throw fail("value, method and timestamp must be strings");
    const std::string digits = j["value"].get<std::string>();
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw fail("value '" + digits + "' is not a non-negative decimal integer");
    StoreRecord rec;
    rec.count.instance = Instance{j["n"].get<int>(), j["l"].get<int>()};
    try {
      rec.count.instance.validate();
      rec.count.method = method_from_string(j["method"].get<std::string>());
    } catch (const Error& e) {
      throw fail(e.what());
    }
    rec.count.value = BigInt(digits);
    if (!rec.count.instance.feasible() && rec.count.value != 0) throw fail("odd n*l must count zero");
    rec.timestamp = j["timestamp"].get<std::string>();
    return rec;
  }

  void load() {
    std::ifstream is(path_);
    if (!is) return;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      StoreRecord rec = parse_line(line, lineno, path_.string());
      auto [it, inserted] = records_.emplace(rec.count.instance, rec);
      if (!inserted) check_agrees(it->second.count, rec.count);
    }
  }

  std::filesystem::path path_;
  mutable std::mutex mutex_;
  std::map<Instance, StoreRecord> records_;
};

/// Cached value (tagged Method::cached) or a fresh exact count that is then
/// appended to the store.
inline CountValue count_cached(const Instance& inst, ResultsStore& store, unsigned threads = 1) {
  inst.validate();
  if (auto hit = store.find(inst)) {
    hit->method = Method::cached;
    return *hit;
  }
  CountValue cv = count_exact(inst, threads);
  store.append(cv);
  return cv;
}

}  // namespace symcount
