#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace foxlink::app {

enum ExitCode { Ok = 0, CheckFailed = 1, BadConfig = 2, NotConverged = 3 };

// Entry point of the command-line front-end. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Worker count for sweep points: FOXLINK_THREADS if set, else the hardware.
int pool_size();

}  // namespace foxlink::app
