#pragma once

// Command-line front end. Every run produces one JSON document.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace surfcob::cli {

enum ExitCode { kOk = 0, kValidation = 2, kInternal = 3 };

struct Result {
  int exit_code = kOk;
  std::string output;  // a single JSON document, newline-terminated
};

/// `args` excludes the program name.
Result run(const std::vector<std::string>& args);

/// (name, content) of every bundled fixture, sorted by name.
const std::vector<std::pair<std::string_view, std::string_view>>& bundled_fixtures();

}  // namespace surfcob::cli
