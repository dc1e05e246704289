#pragma once

#include <iosfwd>

namespace coarsetop::cli {

// Parses argv, runs one command and writes its report. Returns the process
// exit code: 0 on success, 2 on input errors, 3 on resource-cap refusal.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace coarsetop::cli
