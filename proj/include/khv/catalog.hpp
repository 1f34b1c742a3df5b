#pragma once

#include <string>
#include <vector>

#include "khv/diagram.hpp"

namespace khv {
namespace knotio {

// Bundled diagrams, one PD file per knot under data/catalog. The data
// directory is found via $KHV_DATA, the build-time source path, or ./data.
std::string catalog_dir();
std::vector<std::string> catalog_names();
Diagram catalog_get(const std::string& name);

// The 38-crossing knot K is gated by an oracle: crossing count, Alexander
// polynomial and graded Euler characteristic against fixed reference data.
void validate_k(const Diagram& d);

}  // namespace knotio
}  // namespace khv
