#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace moment::cli {

// Parses argv (argv[0] is the program name) and runs one subcommand.
// Exit codes: 0 success, 1 verification found failing checks, 2 usage, I/O or domain errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Writes to path.tmp and renames over path.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace moment::cli
