#pragma once

#include <iosfwd>

#include "config.hpp"

namespace ogb::cli {

// Each returns an ExitCode and writes <stem>.tsv and <stem>.json into the
// output directory. Failures inside the library propagate as exceptions.
int run_command(const RunConfig& c, std::ostream& out);
int batch_compare_command(const RunConfig& c, std::ostream& out);
int lower_bound_command(const RunConfig& c, std::ostream& out);
int grid_command(const RunConfig& c, std::ostream& out);

}  // namespace ogb::cli
