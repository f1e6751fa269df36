#pragma once

#include <string>

#include "mmvd/fda.hpp"

namespace mmvd {

/// Reads one group from CSV: row 1 = grid points, rows 2+ = one curve
/// each. Comma separated, '.' decimal, no quoting. Parse errors mention
/// the file and line number.
FunctionalSample read_sample_csv(const std::string& path);

/// Writes a sample in the same format.
void write_sample_csv(const std::string& path, const FunctionalSample& sample);

}  // namespace mmvd
