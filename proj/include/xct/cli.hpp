#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xct::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

inline constexpr const char* kVersion = "0.1.0";

/// Runs one command line (args excludes the program name). Results go to
/// files or `out`; diagnostics go to `err` and the log sink.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Column layout of every output table, one line per table.
std::string schema_text();

}  // namespace xct::cli
