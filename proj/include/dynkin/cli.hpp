#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dynkin::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kInvalidConfig = 2;
inline constexpr int kNoEquilibrium = 3;

/// Runs one command line. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace dynkin::cli
