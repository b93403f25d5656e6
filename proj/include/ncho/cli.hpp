#pragma once

#include <iosfwd>

namespace ncho {

/// Entry point of the `ncho` tool. Data goes to `out`, diagnostics to `err`.
/// Returns 0 on success, 2 on invalid input or a parameter point outside the
/// domain of the requested operation, 1 on numerical or internal failures.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ncho
