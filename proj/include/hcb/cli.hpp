#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hcb {

/// Entry point behind the `hcb` binary; takes argv-style arguments without
/// the program name. Factored out so tests can drive it directly.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hcb
