#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace secrec::cli {

enum ExitCode : int {
  kOk = 0,
  kFindings = 1,  ///< lint warnings or failed expectations
  kInputError = 2,
  kEmptyFeasibleSet = 3,
};

/// Runs one `secrec` command line. args[0] is the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace secrec::cli
