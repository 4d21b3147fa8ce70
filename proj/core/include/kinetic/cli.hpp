#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kinetic {

/// Command-line entry point: `--config PATH` selects the run description,
/// and individual settings can be overridden with --kn, --tau, --t-end,
/// --order-x, --order-v, --elements, --scheme, --smoothing-c, --collision
/// and --output-dir. Returns 0 on success and nonzero with a diagnostic on
/// `err` for any failure.
int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace kinetic
