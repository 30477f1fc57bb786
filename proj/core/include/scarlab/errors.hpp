#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace scarlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or unknown configuration input. `line` is 0 when the problem is not
/// tied to a specific line of a config file.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, std::string key = {}, int line = 0)
      : Error(message), key_(std::move(key)), line_(line) {}

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  std::string key_;
  int line_;
};

/// A request that would exceed a configured memory budget or size limit.
class ResourceLimitError : public Error {
 public:
  ResourceLimitError(const std::string& message, std::size_t required_bytes,
                     std::size_t budget_bytes)
      : Error(message), required_(required_bytes), budget_(budget_bytes) {}

  std::size_t required_bytes() const noexcept { return required_; }
  std::size_t budget_bytes() const noexcept { return budget_; }

 private:
  std::size_t required_;
  std::size_t budget_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver gave up; the best residuals reached are attached.
class NonConvergence : public NumericalError {
 public:
  NonConvergence(const std::string& message, std::vector<double> best_residuals)
      : NumericalError(message), residuals_(std::move(best_residuals)) {}

  const std::vector<double>& best_residuals() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

}  // namespace scarlab
