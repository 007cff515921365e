#pragma once

#include <stdexcept>
#include <string>

namespace rmedge {

enum class ErrorKind {
  invalid_argument,
  out_of_domain,
  near_singular,
  truncation,
  hypothesis_violation,
  contraction_failure,
  divergence,
  resolution,
  wrong_period,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& module, const std::string& msg)
      : std::runtime_error(module + ": " + to_string(kind) + ": " + msg),
        kind_(kind),
        module_(module) {}

  ErrorKind kind() const { return kind_; }
  const std::string& module() const { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

}  // namespace rmedge
