#pragma once

#include "khv/diagram.hpp"
#include "khv/laurent.hpp"

namespace khv {
namespace grading {

// Unnormalized Jones polynomial (unknot -> q + 1/q), computed by a
// Temperley-Lieb state contraction over the Kauffman bracket expansion.
// Matches the graded Euler characteristic of Khovanov homology including
// the writhe correction; entirely independent of the homology code paths.
Laurent1 kauffman_jones(const knotio::Diagram& d, int crossing_budget = 42);

}  // namespace grading
}  // namespace khv
