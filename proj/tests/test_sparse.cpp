#include <doctest.h>

#include <random>
#include <vector>

#include "khv/sparse.hpp"

using namespace khv;
using exactla::SparseMat;
using exactla::SparseVec;

namespace {

// Independent dense oracle: rank = size of the largest nonzero minor.
int minor_rank(const std::vector<std::vector<long>>& m) {
  int rows = static_cast<int>(m.size());
  int cols = rows ? static_cast<int>(m[0].size()) : 0;
  auto det = [&](const std::vector<int>& ri, const std::vector<int>& ci) {
    int n = static_cast<int>(ri.size());
    std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a[i][j] = m[ri[i]][ci[j]];
    Rat d = 1;
    for (int k = 0; k < n; ++k) {
      int p = -1;
      for (int r = k; r < n; ++r)
        if (a[r][k] != 0) {
          p = r;
          break;
        }
      if (p < 0) return Rat(0);
      if (p != k) {
        std::swap(a[p], a[k]);
        d = -d;
      }
      d *= a[k][k];
      for (int r = k + 1; r < n; ++r) {
        Rat f = a[r][k] / a[k][k];
        for (int c = k; c < n; ++c) a[r][c] -= f * a[k][c];
      }
    }
    return d;
  };
  for (int size = std::min(rows, cols); size >= 1; --size) {
    std::vector<int> ri(size), ci(size);
    std::function<bool(int, int)> pick_rows = [&](int pos, int start) {
      if (pos == size) {
        std::function<bool(int, int)> pick_cols = [&](int cp, int cs) {
          if (cp == size) return det(ri, ci) != 0;
          for (int c = cs; c < cols; ++c) {
            ci[cp] = c;
            if (pick_cols(cp + 1, c + 1)) return true;
          }
          return false;
        };
        return pick_cols(0, 0);
      }
      for (int r = start; r < rows; ++r) {
        ri[pos] = r;
        if (pick_rows(pos + 1, r + 1)) return true;
      }
      return false;
    };
    if (pick_rows(0, 0)) return size;
  }
  return 0;
}

}  // namespace

TEST_CASE("rank basics") {
  SparseMat z(4, 3);
  CHECK(z.rank() == 0);
  SparseMat id(5, 5);
  for (int k = 0; k < 5; ++k) id.add(k, k, 1);
  CHECK(id.rank() == 5);
}

TEST_CASE("rank matches the dense minor oracle on random matrices") {
  std::mt19937 rng(991);
  std::uniform_int_distribution<long> val(-3, 3);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::vector<long>> m(6, std::vector<long>(6));
    SparseMat s(6, 6);
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) {
        long v = val(rng);
        if (trial % 3 == 0 && (r + c) % 2) v = 0;  // mix in sparsity
        m[r][c] = v;
        if (v) s.add(r, c, v);
      }
    CHECK(s.rank() == minor_rank(m));
  }
}

TEST_CASE("rank + nullity = cols and rank is transpose invariant") {
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> val(-2, 2), dims(1, 8);
  for (int trial = 0; trial < 60; ++trial) {
    int rows = dims(rng), cols = dims(rng);
    SparseMat s(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        int v = val(rng);
        if (v) s.add(r, c, v);
      }
    int rk = s.rank();
    CHECK(rk + static_cast<int>(s.kernel_basis().size()) == cols);
    CHECK(s.transposed().rank() == rk);
  }
}

TEST_CASE("kernel examples") {
  SparseMat z(3, 3);
  CHECK(z.kernel_basis().size() == 3);
  SparseMat id(3, 3);
  for (int k = 0; k < 3; ++k) id.add(k, k, 1);
  CHECK(id.kernel_basis().empty());
  SparseMat ones(2, 2);
  ones.add(0, 0, 1);
  ones.add(0, 1, 1);
  ones.add(1, 0, 1);
  ones.add(1, 1, 1);
  auto kb = ones.kernel_basis();
  REQUIRE(kb.size() == 1);
  // spans (1, -1)
  Rat a = kb[0].count(0) ? kb[0][0] : Rat(0);
  Rat b = kb[0].count(1) ? kb[0][1] : Rat(0);
  CHECK(a == -b);
  CHECK(a != 0);
}

TEST_CASE("kernel vectors are annihilated") {
  std::mt19937 rng(5150);
  std::uniform_int_distribution<int> val(-2, 2);
  for (int trial = 0; trial < 30; ++trial) {
    SparseMat s(5, 7);
    for (int r = 0; r < 5; ++r)
      for (int c = 0; c < 7; ++c) {
        int v = val(rng);
        if (v) s.add(r, c, v);
      }
    for (auto& v : s.kernel_basis()) {
      std::map<int, Rat> img;
      for (auto& [c, coef] : v)
        for (auto& [r, mv] : s.column(c)) img[r] += mv * coef;
      for (auto& [r, coef] : img) CHECK(coef == 0);
    }
  }
}

TEST_CASE("staircase pivots count prefix ranks") {
  // columns of [[1,1],[1,1]] in some order: one pivot expected
  std::vector<SparseVec> cols(2);
  cols[0][0] = 1;
  cols[0][1] = 1;
  cols[1][0] = 1;
  cols[1][1] = 1;
  auto pv = exactla::staircase_pivots(cols);
  CHECK(pv.size() == 1);
}

TEST_CASE("fraction-free rank agrees with the pivoting path") {
  std::mt19937 rng(31337);
  std::uniform_int_distribution<int> val(-4, 4);
  for (int trial = 0; trial < 40; ++trial) {
    SparseMat s(7, 7);
    for (int r = 0; r < 7; ++r)
      for (int c = 0; c < 7; ++c) {
        int v = val(rng);
        if (v) s.add(r, c, Rat(v, 1 + (trial % 3)));
      }
    CHECK(s.rank() == s.rank_fraction_free());
  }
}
