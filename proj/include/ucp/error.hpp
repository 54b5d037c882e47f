#pragma once

#include <stdexcept>
#include <string>

namespace ucp {

/// Input rejected before or while checking hypotheses. The CLI maps it to exit status 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed scenario file; `path()` is a JSON pointer to the offending element.
class SchemaError : public ValidationError {
 public:
  SchemaError(std::string path, const std::string& what)
      : ValidationError(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A numerical stage could not certify its output. The CLI maps it to exit status 3.
class CertificationError : public std::runtime_error {
 public:
  CertificationError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace ucp
