#ifndef MARGOPEN_ERROR_HPP
#define MARGOPEN_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace margopen {

enum class ErrorKind {
  invalid_interval,
  invalid_space,
  negativity,
  mass,
  mass_mismatch,
  parameter,
  hypothesis,
  internal_consistency,
  schema,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_interval: return "invalid-interval";
    case ErrorKind::invalid_space: return "invalid-space";
    case ErrorKind::negativity: return "negativity";
    case ErrorKind::mass: return "mass";
    case ErrorKind::mass_mismatch: return "mass-mismatch";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::hypothesis: return "hypothesis-violation";
    case ErrorKind::internal_consistency: return "internal-consistency";
    case ErrorKind::schema: return "schema";
  }
  return "unknown";
}

/// Every failure raised by the library carries a kind so callers (and the
/// CLI exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace margopen

#endif  // MARGOPEN_ERROR_HPP
