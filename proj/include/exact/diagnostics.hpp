#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace exact {

enum class Severity { Info, Warning, Error };

const char* to_string(Severity s);

/// A located message produced by any analysis stage. `where` names the
/// artifact (manifest path, module name, sheet) and `line` is 0 when the
/// message has no source line.
struct Diagnostic {
  Severity severity = Severity::Warning;
  std::string where;
  int line = 0;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

using Diagnostics = std::vector<Diagnostic>;

bool has_errors(const Diagnostics& diags);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed A1 references.
class ReferenceError : public Error {
 public:
  using Error::Error;
};

/// Raised when a bundle cannot be turned into a valid snapshot. Carries every
/// issue found, not only the first.
class BundleError : public Error {
 public:
  explicit BundleError(Diagnostics issues);
  const Diagnostics& issues() const { return issues_; }

 private:
  Diagnostics issues_;
};

}  // namespace exact
