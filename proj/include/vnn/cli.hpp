#pragma once

#include <string>
#include <vector>

namespace vnn {

// Entry point behind the vnn binary; args excludes the program name.
// Subcommands: train, eval, gradcheck, export-activation. Returns 0 on
// success, 1 on usage errors, 2 on data/model errors, 3 when gradcheck
// finds failures.
int cli_main(const std::vector<std::string>& args);

}  // namespace vnn
