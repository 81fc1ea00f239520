#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace ogb::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kRuntimeError = 3,
  kBoundViolated = 4,
};

/// Every violated constraint of a rejected configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// The `ogb` entry point. Human-readable progress goes to `out`, diagnostics to `err`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ogb::cli
