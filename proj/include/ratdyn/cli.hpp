#pragma once

#include <ostream>

namespace ratdyn {

/// Runs one command line. Reports go to `out`, diagnostics to `err`.
/// Exit codes: 0 success, 1 I/O or failed reproduction checks, 2 validation,
/// 3 numerical failure, 4 hypothesis failure.
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ratdyn
