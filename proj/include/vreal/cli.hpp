#pragma once

// Command-line front end. The library entry point takes the argument vector
// (without the program name) and two streams, so tests can drive it
// in-process.

#include <ostream>
#include <string>
#include <vector>

namespace vreal::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kIoError = 3,
  kBadLog = 4,
  kBadCsv = 5,
};

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vreal::cli
