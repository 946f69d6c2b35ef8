#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ptope {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  explicit SingularMatrixError(std::size_t pivot)
      : Error("matrix is numerically singular at pivot " + std::to_string(pivot)), pivot_(pivot) {}
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class CornerCapError : public Error {
 public:
  CornerCapError(std::size_t nondegenerate, std::size_t cap)
      : Error("LDI enclosure has " + std::to_string(nondegenerate) +
              " non-degenerate entries; enumerating corners would exceed the cap of " +
              std::to_string(cap) +
              ". No eigenvalue-over-interval fallback is available: coarsen the enclosure "
              "or raise the cap"),
        nondegenerate_(nondegenerate) {}
  std::size_t nondegenerate() const noexcept { return nondegenerate_; }

 private:
  std::size_t nondegenerate_;
};

class IntegrationError : public Error {
 public:
  IntegrationError(std::size_t step, const std::string& cause)
      : Error("integration aborted at step " + std::to_string(step) + ": " + cause), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& reason)
      : Error("config field '" + field + "': " + reason), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace ptope
