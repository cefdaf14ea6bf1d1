#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gallerysheaf {

// Invalid user input: unsupported type/rank, malformed word, envelope exceeded.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A mathematical statement that must hold failed on concrete data.
class InvariantViolation : public std::runtime_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

// Outcome of a property check; failures carry a location.
struct Report {
  bool ok = true;
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void fail(const std::string& what) {
    ok = false;
    failures.push_back(what);
  }
  void require(bool cond, const std::string& what) {
    if (!cond) fail(what);
  }
  void merge(const Report& o) {
    ok = ok && o.ok;
    failures.insert(failures.end(), o.failures.begin(), o.failures.end());
    notes.insert(notes.end(), o.notes.begin(), o.notes.end());
  }
  std::string first_failure() const { return failures.empty() ? std::string() : failures.front(); }
};

}  // namespace gallerysheaf
