#include <doctest.h>

#include "khv/diagram.hpp"
#include "khv/errors.hpp"
#include "khv/jones.hpp"

using namespace khv;
using grading::Laurent1;

namespace {

// Independent brute-force oracle: the full 2^n state sum.
Laurent1 state_sum_jones(const knotio::Diagram& d) {
  Laurent1 circ;
  circ.set(1, 1);
  circ.set(-1, 1);
  if (d.size() == 0) return circ;
  int n = static_cast<int>(d.size());
  Laurent1 total;
  for (uint32_t v = 0; v < (1u << n); ++v) {
    // circles of this resolution
    std::map<int, int> parent;
    std::function<int(int)> find = [&](int a) {
      if (!parent.count(a)) parent[a] = a;
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    auto unite = [&](int a, int b) {
      a = find(a);
      b = find(b);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    };
    int r = 0;
    for (int ci = 0; ci < n; ++ci) {
      auto& t = d.crossings()[ci].e;
      if ((v >> ci) & 1) {
        unite(t[0], t[3]);
        unite(t[1], t[2]);
        ++r;
      } else {
        unite(t[0], t[1]);
        unite(t[2], t[3]);
      }
    }
    std::set<int> reps;
    for (auto& [e, ends] : d.incidences()) reps.insert(find(e));
    int circles = static_cast<int>(reps.size());
    // weight (-1)^(r - n_minus) q^(r + n_plus - 2 n_minus) (q + 1/q)^circles
    Laurent1 w;
    int sign = (r - d.n_minus()) % 2 ? -1 : 1;
    w.set(r + d.n_plus() - 2 * d.n_minus(), sign);
    for (int k = 0; k < circles; ++k) w = w * circ;
    total = total + w;
  }
  return total;
}

}  // namespace

TEST_CASE("unknots give q + 1/q") {
  Laurent1 u;
  u.set(1, 1);
  u.set(-1, 1);
  CHECK(grading::kauffman_jones(knotio::parse_pd("UNKNOT")) == u);
  CHECK(grading::kauffman_jones(knotio::from_braid({1}, 2)) == u);
  CHECK(grading::kauffman_jones(knotio::from_braid({1, -2}, 3)) == u);
}

TEST_CASE("right trefoil matches the hand skein computation") {
  Laurent1 want;
  want.set(1, 1);
  want.set(3, 1);
  want.set(5, 1);
  want.set(9, -1);
  CHECK(grading::kauffman_jones(knotio::from_braid({1, 1, 1}, 2)) == want);
}

TEST_CASE("scanline contraction equals the brute-force state sum") {
  std::vector<std::vector<int>> words = {
      {1, 1, 1}, {1, -2, 1, -2}, {1, 1, 1, 1, 1}, {1, 1, 1, 2, -1, 2},
      {1, 1, 1, -2, 1, -2}, {2, 2, -1, 2, -1, -1},
      {1, 1, 1, -2, -1, -1, -1, -2}};
  std::vector<int> strands = {2, 3, 2, 3, 3, 3, 3};
  for (size_t k = 0; k < words.size(); ++k) {
    auto d = knotio::from_braid(words[k], strands[k]);
    CHECK(grading::kauffman_jones(d) == state_sum_jones(d));
  }
}

TEST_CASE("budget is enforced") {
  auto d = knotio::from_braid({1, 1, 1}, 2);
  CHECK_THROWS_AS(grading::kauffman_jones(d, 2), BudgetError);
}
