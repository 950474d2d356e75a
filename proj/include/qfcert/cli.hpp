#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qfcert {

// Command-line front end.  `args` excludes the program name.  Returns the
// process exit code: 0 for verified / true / zero residue / isotropic,
// 1 for not-verified / false / anisotropic / not decided, 2 for usage or
// input errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qfcert
