#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace secgame {

// Argument outside an operation's documented domain: negative rationality,
// infeasible allocation, probability outside (0, 1], and the like.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A structural hypothesis of an operation does not hold. Closed forms and
// proved bounds refuse inputs outside the family they are derived for
// instead of extrapolating.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed sweep or CLI configuration. The message starts with the
// offending field path ("lambda_values[3]", "space", ...).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field_path, const std::string& message)
      : std::runtime_error(field_path + ": " + message),
        field_path_(std::move(field_path)) {}

  const std::string& field_path() const noexcept { return field_path_; }

 private:
  std::string field_path_;
};

// Sink for non-fatal validation notes (curve values above one, probabilities
// clamped before weighting). Callers that do not care pass nullptr.
struct ValidationLog {
  std::vector<std::string> entries;

  void warn(std::string message) { entries.push_back(std::move(message)); }
  bool empty() const noexcept { return entries.empty(); }
  std::size_t size() const noexcept { return entries.size(); }
};

inline void warn_into(ValidationLog* log, std::string message) {
  if (log != nullptr) log->warn(std::move(message));
}

}  // namespace secgame
