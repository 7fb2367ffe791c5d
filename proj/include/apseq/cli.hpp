#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace apseq::cli {

enum ExitCode { Ok = 0, Usage = 1, Budget = 2, Internal = 3 };

/// Runs one `apseq` invocation. `args` excludes the program name. Data goes
/// to `out` (JSON or CSV only), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace apseq::cli
