#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace steinspc::cli {

enum ExitCode : int
{
    kExitOk = 0,
    kExitUsage = 1,
    kExitInput = 2,
    kExitNumerical = 3,
};

/// Entry point of the stein-spc tool. `args[0]` is the program name.
int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);

}  // namespace steinspc::cli
