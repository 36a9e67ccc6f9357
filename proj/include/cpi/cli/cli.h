#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cpi::cli {

// Runs one subcommand: prepare, stats, train, eval, ablate, synth or
// gradcheck. Returns 0 on success, 1 when inputs fail validation or a
// stage fails, 2 on a command-line usage error.
int cli_main(int argc, const char* const* argv);
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cpi::cli
