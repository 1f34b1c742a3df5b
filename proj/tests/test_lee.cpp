#include <doctest.h>

#include "khv/catalog.hpp"
#include "khv/cube.hpp"
#include "khv/errors.hpp"
#include "khv/lee.hpp"

using namespace khv;
using khcomplex::Theory;

namespace {

lee::PageSet pages_of(const std::string& name) {
  auto d = knotio::catalog_get(name);
  auto c = khcomplex::build_complex(d, Theory::Lee);
  return lee::compute_pages(c);
}

}  // namespace

TEST_CASE("unknot pages") {
  auto p = pages_of("unknot");
  CHECK(p.pages.size() == 1);
  CHECK(p.einf.dim(0, 1) == 1);
  CHECK(p.einf.dim(0, -1) == 1);
  CHECK(p.last_nonzero_diff() == 0);
  CHECK(lee::s_invariant(p) == 0);
}

TEST_CASE("right trefoil: one d1 cancellation from (2,5)") {
  auto p = pages_of("trefoil_r");
  REQUIRE(p.pages.size() >= 2);
  CHECK(p.pages[0].diff_ranks.size() == 1);
  CHECK(p.pages[0].diff_ranks.at({2, 5}) == 1);
  CHECK(p.page(2).dims.dim(0, 1) == 1);
  CHECK(p.page(2).dims.dim(0, 3) == 1);
  CHECK(p.page(2).dims.total() == 2);
  CHECK(p.einf == p.page(2).dims);
  CHECK(lee::s_invariant(p) == 2);
}

TEST_CASE("figure eight: s = 0, degenerate after the first page") {
  auto p = pages_of("figure8");
  CHECK(lee::s_invariant(p) == 0);
  for (auto& pg : p.pages)
    if (pg.n >= 2) CHECK(pg.total_rank() == 0);
}

TEST_CASE("page computation requires the deformed theory") {
  auto d = knotio::catalog_get("trefoil_r");
  auto plain = khcomplex::build_complex(d, Theory::Plain);
  CHECK_THROWS_AS(lee::compute_pages(plain), ValidationError);
}

TEST_CASE("first page is Khovanov homology") {
  for (auto& name : {"trefoil_r", "figure8", "5_2", "6_2", "8_20"}) {
    auto d = knotio::catalog_get(name);
    auto c = khcomplex::build_complex(d, Theory::Lee);
    auto p = lee::compute_pages(c);
    CHECK(p.pages[0].dims == khcomplex::khovanov_homology(d));
  }
}

TEST_CASE("page totals drop by twice the rank and einf is the pawn pair") {
  for (auto& name :
       {"unknot_1", "trefoil_l", "figure8", "5_1", "5_2", "6_3", "8_20"}) {
    auto p = pages_of(name);
    for (size_t k = 0; k + 1 < p.pages.size(); ++k)
      CHECK(p.pages[k + 1].dims.total() ==
            p.pages[k].dims.total() - 2 * p.pages[k].total_rank());
    CHECK(p.einf.total() == 2);
    int s = lee::s_invariant(p);
    CHECK(p.einf.dim(0, s - 1) == 1);
    CHECK(p.einf.dim(0, s + 1) == 1);
    CHECK(s % 2 == 0);
  }
}

TEST_CASE("trefoil decomposition: f_2 = t^2 q^5") {
  auto d = knotio::catalog_get("trefoil_r");
  auto p = pages_of("trefoil_r");
  auto kh = khcomplex::khovanov_homology(d).poincare_series();
  auto dec = lee::decomposition_from_pages(p, kh);
  CHECK(dec.s == 2);
  REQUIRE(dec.f.size() == 1);
  CHECK(dec.f.at(1) == grading::Laurent2::monomial(1, 2, 5));
}

TEST_CASE("unknot decomposition has no knight pieces") {
  auto p = pages_of("unknot");
  grading::Laurent2 kh;
  kh.add(0, 1, 1);
  kh.add(0, -1, 1);
  auto dec = lee::decomposition_from_pages(p, kh);
  CHECK(dec.f.empty());
}

TEST_CASE("decomposition identity holds across small knots") {
  for (auto& name : {"figure8", "5_2", "6_1", "8_20"}) {
    auto d = knotio::catalog_get(name);
    auto p = pages_of(name);
    auto kh = khcomplex::khovanov_homology(d).poincare_series();
    // throws on any identity or nonnegativity failure
    auto dec = lee::decomposition_from_pages(p, kh);
    (void)dec;
  }
}

TEST_CASE("differential bidegrees are (1, 4n)") {
  auto p = pages_of("5_2");
  for (auto& pg : p.pages)
    for (auto& [src, rank] : pg.diff_ranks) {
      // rank map recorded at the source; target support must exist on the
      // previous page at (i+1, j+4n)
      CHECK(pg.dims.dim(src.first, src.second) >= 0);
      CHECK(rank > 0);
    }
}
