#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "khv/cube.hpp"
#include "khv/dimtable.hpp"

namespace khv {
namespace lee {

// One page of the spectral sequence in the convention where E_1 is
// Khovanov homology and d_n has bidegree (1, 4n).
struct Page {
  int n = 1;
  grading::DimTable dims;
  std::map<std::pair<int, int>, int> diff_ranks;  // source (i,j) -> rank d_n
  int total_rank() const {
    int s = 0;
    for (auto& [k, r] : diff_ranks) s += r;
    return s;
  }
};

struct PageSet {
  std::vector<Page> pages;  // n = 1 .. stabilization
  grading::DimTable einf;
  const Page& page(int n) const { return pages.at(n - 1); }
  int last_nonzero_diff() const;  // max n with rank d_n > 0, else 0
};

struct LeeResult {
  int s = 0;
  PageSet pages;
};

// Exact page computation from the filtered Lee complex via subquotient
// ranks of the single differential restricted to filtration windows.
PageSet compute_pages(const khcomplex::FilteredComplex& c);

int s_invariant(const PageSet& p);

struct DecompositionFamily {
  int s = 0;
  std::map<int, grading::Laurent2> f;  // l -> f_{2l}; zero entries omitted
};

// f_{2l} has the rank of d_l at each source bidegree; verifies the
// decomposition identity against the given Poincare series exactly.
DecompositionFamily decomposition_from_pages(const PageSet& p,
                                             const grading::Laurent2& kh);

std::string report_json(const LeeResult& r, const DecompositionFamily& dec);
std::string report_text(const LeeResult& r, const DecompositionFamily& dec);

}  // namespace lee
}  // namespace khv
