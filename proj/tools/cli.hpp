#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace inqkit::cli {

// args excludes the program name.  Exit codes: 0 success or true, 1 a false
// boolean verdict, 2 usage, input or cap errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}   // namespace inqkit::cli
