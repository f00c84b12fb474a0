#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace opschur::cli {

/// Runs the command-line front end. Returns the process exit code: 0 on
/// success, 1 on a domain error (NotCompletable, NotDefined, NotPositive,
/// NotRepresentable, ...), 2 on input or format errors. Reports go to out as
/// a single JSON document (or a text summary with --text); diagnostics go to
/// err.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace opschur::cli
