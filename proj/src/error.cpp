#include "rmedge/error.hpp"

namespace rmedge {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::out_of_domain: return "out-of-domain";
    case ErrorKind::near_singular: return "near-singular";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::hypothesis_violation: return "hypothesis-violation";
    case ErrorKind::contraction_failure: return "contraction-failure";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::resolution: return "resolution";
    case ErrorKind::wrong_period: return "wrong-period";
  }
  return "unknown";
}

}  // namespace rmedge
