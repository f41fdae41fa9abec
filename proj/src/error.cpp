#include "shg/error.hpp"

namespace shg {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Pole: return "pole";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Coincidence: return "coincidence";
    case ErrorKind::NonConvergence: return "nonconvergence";
    case ErrorKind::Config: return "config";
    case ErrorKind::Region: return "region";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

}  // namespace shg
