// Small harness comparing the rational pivoting and fraction-free
// elimination paths on the homology workload. Not part of ctest.

#include <chrono>
#include <iostream>

#include "khv/catalog.hpp"
#include "khv/cube.hpp"

using namespace khv;

int main() {
  for (auto& name : {"6_2", "7_4", "8_20", "9_1", "10_1"}) {
    auto d = knotio::catalog_get(name);
    auto c = khcomplex::build_complex(d, khcomplex::Theory::Plain, 12);
    long nnz = 0;
    for (auto& [i, m] : c.diff) nnz += static_cast<long>(m.nnz());
    double t_rat = 0, t_ff = 0;
    int r_rat = 0, r_ff = 0;
    for (auto& [i, m] : c.diff) {
      auto t0 = std::chrono::steady_clock::now();
      r_rat += m.rank();
      auto t1 = std::chrono::steady_clock::now();
      r_ff += m.rank_fraction_free();
      auto t2 = std::chrono::steady_clock::now();
      t_rat += std::chrono::duration<double>(t1 - t0).count();
      t_ff += std::chrono::duration<double>(t2 - t1).count();
    }
    std::cout << name << ": nnz=" << nnz << " rank=" << r_rat
              << (r_rat == r_ff ? "" : " MISMATCH")
              << "  pivoting " << t_rat << " s, fraction-free " << t_ff
              << " s\n";
  }
  return 0;
}
