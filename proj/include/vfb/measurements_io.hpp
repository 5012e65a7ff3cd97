#pragma once

#include <iosfwd>
#include <string>

#include "vfb/measurements.hpp"

// Measurements file: structured key-value text with sigma0 as 3 numbers in
// Mandel order, grad0 as 4 numbers F0-first, then energy, a, b, area.

namespace vfb {

void write_measurements(std::ostream& out, const Measurements& m);
Measurements read_measurements(std::istream& in);
Measurements read_measurements_file(const std::string& path);
void write_measurements_file(const std::string& path, const Measurements& m);

} // namespace vfb
