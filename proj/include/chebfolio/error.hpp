#pragma once

#include <stdexcept>
#include <string>

namespace chebfolio {

/// Failure category. The CLI maps these onto process exit codes.
enum class ErrorKind {
  input,          // malformed or invalid data (exit 2)
  numerical,      // domain violations, degenerate statistics (exit 3)
  configuration,  // inconsistent options (exit 4)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error input_error(const std::string& what) {
  return {ErrorKind::input, what};
}

inline Error numerical_error(const std::string& what) {
  return {ErrorKind::numerical, what};
}

inline Error config_error(const std::string& what) {
  return {ErrorKind::configuration, what};
}

inline int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::input: return 2;
    case ErrorKind::numerical: return 3;
    case ErrorKind::configuration: return 4;
  }
  return 1;
}

}  // namespace chebfolio
