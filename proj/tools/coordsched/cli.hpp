#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace coordsched::cli {

/// Process exit codes. Stable public contract.
enum ExitCode : int {
    kOk = 0,
    kDiagnostics = 1,         // parse / validation / fault-tolerance errors
    kUsageOrIo = 2,           // unreadable input file, bad flags
    kModelInputs = 3,         // platform or contracts errors, missing contracts, input drift
    kInfeasible = 4,          // no deadline-meeting schedule
    kSimulationViolation = 5, // schedule rejected by the simulator
};

/// Runs `coordsched <args...>` (args exclude the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coordsched::cli
