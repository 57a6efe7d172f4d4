#pragma once

#include <stdexcept>
#include <string>

namespace cfkdv {

enum class ErrorKind {
  ContextMismatch,        // ExpSum operands carry different (lambda1, lambda2)
  Resonance,              // inverse operator denominator below threshold
  Range,                  // evaluation would overflow / leave the domain
  InvalidParam,           // parameter set violates an invariant
  DistinctRootsViolation, // a == 1, i.e. lambda1 == lambda2
  Index,                  // missing correction order
  Input,                  // unparseable file / config
  VanishingQ,             // closed-form denominator too close to zero
  NotImplemented,         // mixed-sign / all-negative boundary leading terms
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::ContextMismatch: return "context-mismatch";
    case ErrorKind::Resonance: return "resonance";
    case ErrorKind::Range: return "range";
    case ErrorKind::InvalidParam: return "invalid-param";
    case ErrorKind::DistinctRootsViolation: return "distinct-roots-violation";
    case ErrorKind::Index: return "index";
    case ErrorKind::Input: return "input";
    case ErrorKind::VanishingQ: return "vanishing-q";
    case ErrorKind::NotImplemented: return "not-implemented";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  const char* kind_name() const { return error_kind_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace cfkdv
