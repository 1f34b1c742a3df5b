#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "khv/diagram.hpp"
#include "khv/dimtable.hpp"
#include "khv/sparse.hpp"

namespace khv {
namespace khcomplex {

enum class Theory { Plain, Lee };

// One smoothing of the whole diagram: circles with a canonical ordering
// (sorted by the smallest edge id they contain).
struct Resolution {
  int circle_count = 0;
  std::map<int, int> circle_of_edge;
};

Resolution resolve(const knotio::Diagram& d, uint64_t vertex);

// A cube generator: resolution vertex plus one label bit per circle
// (bit set = X, clear = unit). Gradings: i = r - n_minus,
// j = (#unit - #X) + r + n_plus - 2 n_minus.
struct Gen {
  uint32_t vertex = 0;
  uint32_t labels = 0;
  int j = 0;
};

// Cochain complex of the cube with the quantum filtration. The stored
// differential is the full D = d0 + phi; phi = 0 in the plain theory.
class FilteredComplex {
 public:
  Theory theory = Theory::Plain;
  int nplus = 0, nminus = 0;
  std::map<int, std::vector<Gen>> gens;     // canonical order per degree
  std::map<int, exactla::SparseMat> diff;   // D_i : C^i -> C^{i+1}

  int min_i() const { return gens.empty() ? 0 : gens.begin()->first; }
  int max_i() const { return gens.empty() ? 0 : gens.rbegin()->first; }
  int dim(int i) const {
    auto it = gens.find(i);
    return it == gens.end() ? 0 : static_cast<int>(it->second.size());
  }

  void check_d_squared() const;  // throws InternalError on failure
  void check_gradings() const;   // d raises i by 1; jumps j by 0 or 4
  bool has_phi() const;          // any +4 jump present

  std::string debug_dump() const;
};

inline constexpr int kDefaultDirectBudget = 14;

// Direct 2^n construction. Throws BudgetError beyond the crossing budget
// and ValidationError for multi-component diagrams.
FilteredComplex build_complex(const knotio::Diagram& d, Theory theory,
                              int budget = kDefaultDirectBudget);

grading::DimTable khovanov_homology(const knotio::Diagram& d,
                                    int budget = kDefaultDirectBudget);

}  // namespace khcomplex

namespace exactla {
// Bigraded cohomology of the associated graded complex (the j-preserving
// part of the differential), dim ker - dim im per bigrading.
grading::DimTable homology_dims(const khcomplex::FilteredComplex& c);
}  // namespace exactla

}  // namespace khv
