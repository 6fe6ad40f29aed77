#pragma once

namespace rsf {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,     // I/O error, or a search that found nothing
  kExitUsage = 2,       // bad arguments or violated preconditions
  kExitOracle = 3,      // the detector/embedder failed
};

/// Entry point of `rsflicker simulate | attack-dos | attack-dodge | defend | sweep`.
int run_cli(int argc, char** argv);

}  // namespace rsf
