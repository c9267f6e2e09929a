#pragma once

#include <stdexcept>
#include <string>

namespace scamlgp {

// Cholesky factorization failed at every jitter level on the ladder.
class NotPositiveDefiniteError : public std::runtime_error {
 public:
  NotPositiveDefiniteError(const std::string& what, double final_jitter)
      : std::runtime_error(what), final_jitter_(final_jitter) {}
  double final_jitter() const noexcept { return final_jitter_; }

 private:
  double final_jitter_;
};

// A cached quantity was built for different inputs than the ones supplied.
class StaleCacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every candidate of a finite domain has already been visited.
class ExhaustedDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A guard against accidentally huge dense computations fired.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every restart of a hyperparameter search failed.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid experiment configuration (maps to exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem-level failure (maps to exit code 3).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed file contents.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace scamlgp
