#pragma once

#include <stdexcept>
#include <string>

namespace shg {

enum class ErrorKind {
  Pole,
  Domain,
  Coincidence,
  NonConvergence,
  Config,
  Region,
  Internal
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

}  // namespace shg
