#pragma once

#include <string>
#include <vector>

namespace rxn {

// Entry point shared by the rxnpack binary and the CLI tests.
// Exit codes: 0 success, 1 input/parse/validation error, 2 computation or
// tolerance failure.
int run_cli(const std::vector<std::string>& args);

} // namespace rxn
