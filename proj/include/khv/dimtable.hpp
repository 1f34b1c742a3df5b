#pragma once

#include <map>
#include <string>
#include <utility>

#include "khv/laurent.hpp"

namespace khv {
namespace grading {

struct Bigrading {
  int i = 0;  // homological
  int j = 0;  // quantum
  auto operator<=>(const Bigrading&) const = default;
};

// Finite table of bigraded dimensions; zeros are never stored.
class DimTable {
 public:
  using Map = std::map<std::pair<int, int>, int>;

  DimTable() = default;

  const Map& entries() const { return t_; }
  bool empty() const { return t_.empty(); }
  int dim(int i, int j) const {
    auto it = t_.find({i, j});
    return it == t_.end() ? 0 : it->second;
  }
  void set(int i, int j, int d);
  void add(int i, int j, int d);
  int total() const;
  bool operator==(const DimTable& o) const { return t_ == o.t_; }
  bool operator!=(const DimTable& o) const { return t_ != o.t_; }

  // all nonzero entries have odd quantum grading
  bool odd_j_support() const;

  DimTable mirrored() const;  // (i,j) -> (-i,-j)

  Laurent2 poincare_series() const;
  Laurent1 graded_euler() const;

  std::string render_grid() const;  // i across (ascending), j down (descending)
  std::string to_json() const;      // [{"i":..,"j":..,"dim":..}, ...]
  std::string to_csv() const;       // header i,j,dim
  static DimTable from_json(const std::string& text);

 private:
  Map t_;
};

}  // namespace grading
}  // namespace khv
