#pragma once

#include <map>
#include <vector>

#include "khv/rat.hpp"

namespace khv {
namespace exactla {

using SparseVec = std::map<int, Rat>;  // index -> nonzero coefficient

// Exact sparse matrix over Q. No stored zeros.
class SparseMat {
 public:
  SparseMat(int rows = 0, int cols = 0) : rows_(rows), cols_(cols) {
    col_.resize(cols_);
  }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  size_t nnz() const;

  void add(int r, int c, const Rat& v);
  Rat at(int r, int c) const;
  const SparseVec& column(int c) const { return col_[c]; }
  SparseMat transposed() const;

  // exact rank; Markowitz pivoting, deterministic tie-breaks
  int rank() const;
  // exact rank via fraction-free (integer-preserving) elimination after
  // clearing denominators; measurable alternative for swell control
  int rank_fraction_free() const;
  // exact kernel basis; size = cols - rank
  std::vector<SparseVec> kernel_basis() const;

  std::string dump() const;  // triplet text, one entry per line

 private:
  int rows_, cols_;
  std::vector<SparseVec> col_;
};

// Pivot of a filtered reduction: which column got paired with which row.
struct Pivot {
  int col = -1;
  int row = -1;
};

// Column reduction in the given column order with "lowest surviving row"
// pivots (rows compared by their position in the given total order).
// Returns the pivot pairs; they determine the ranks of all blocks
// (column-prefix x row-prefix), which is what the spectral sequence
// page computation consumes.
std::vector<Pivot> staircase_pivots(const std::vector<SparseVec>& columns);

}  // namespace exactla
}  // namespace khv
