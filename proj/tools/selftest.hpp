#pragma once

#include <ostream>

namespace cameo::tools {

/// Quick in-binary oracle checks; prints one line per check.
bool run_selftest(std::ostream& out);

}  // namespace cameo::tools
