#include <doctest.h>

#include "khv/audit.hpp"
#include "khv/catalog.hpp"
#include "khv/cube.hpp"
#include "khv/errors.hpp"

using namespace khv;
using grading::DimTable;
using grading::Laurent1;
using grading::Laurent2;

namespace {

Laurent2 series(const DimTable& t) { return t.poincare_series(); }

DimTable trefoil_table() {
  DimTable t;
  t.set(0, 1, 1);
  t.set(0, 3, 1);
  t.set(2, 5, 1);
  t.set(3, 9, 1);
  return t;
}

}  // namespace

TEST_CASE("knight move solve on the unknot") {
  Laurent2 kh;
  kh.add(0, 1, 1);
  kh.add(0, -1, 1);
  auto rep = audit::knight_move_solve(kh, 0);
  CHECK(rep.holds);
  CHECK(rep.f2.is_zero());
}

TEST_CASE("knight move solve on the right trefoil") {
  auto rep = audit::knight_move_solve(series(trefoil_table()), 2);
  CHECK(rep.holds);
  CHECK(rep.f2 == Laurent2::monomial(1, 2, 5));
}

TEST_CASE("solver rejects bad inputs") {
  Laurent2 neg;
  neg.add(0, 1, -1);
  CHECK_THROWS_AS(audit::knight_move_solve(neg, 0), ValidationError);
  Laurent2 even;
  even.add(0, 2, 1);
  CHECK_THROWS_AS(audit::knight_move_solve(even, 0), ValidationError);
}

TEST_CASE("wrong pawn location fails with the pawn cell as witness") {
  auto rep = audit::knight_move_solve(series(trefoil_table()), 0);
  CHECK(!rep.holds);
}

TEST_CASE("matching on the trefoil pairs (2,5)->(3,9)") {
  auto leftover = audit::max_knight_matching(trefoil_table(), 2);
  CHECK(leftover.empty());
  CHECK_THROWS_AS(audit::max_knight_matching(trefoil_table(), 6),
                  ValidationError);
}

TEST_CASE("certificates are empty when d1 suffices") {
  DimTable u;
  u.set(0, -1, 1);
  u.set(0, 1, 1);
  CHECK(audit::higher_diff_certificate(u, 0).empty());
  CHECK(audit::higher_diff_certificate(trefoil_table(), 2).empty());
}

TEST_CASE("alexander of small knots") {
  auto u = audit::alexander(knotio::parse_pd("UNKNOT"));
  CHECK(u.delta == Laurent1::monomial(1, 0));
  CHECK(u.fox_milnor.verdict == audit::FoxMilnorResult::Verdict::Passes);
  CHECK(u.fox_milnor.factor == Laurent1::monomial(1, 0));

  Laurent1 tref;  // t - 1 + 1/t, by the Fox calculus hand computation
  tref.set(-1, 1);
  tref.set(0, -1);
  tref.set(1, 1);
  auto a3 = audit::alexander(knotio::catalog_get("trefoil_r"));
  CHECK(a3.delta == tref);
  CHECK(a3.fox_milnor.verdict == audit::FoxMilnorResult::Verdict::Fails);

  Laurent1 f8;  // -t + 3 - 1/t
  f8.set(-1, -1);
  f8.set(0, 3);
  f8.set(1, -1);
  CHECK(audit::alexander(knotio::catalog_get("figure8")).delta == f8);

  // symmetry and value at 1 across the catalog
  for (auto& name : knotio::catalog_names()) {
    if (name == "K_paper") continue;
    auto d = knotio::catalog_get(name);
    auto a = audit::alexander(d);
    CHECK(a.delta == a.delta.reversed());
    CHECK(a.delta.eval_int(1) == 1);
  }
}

TEST_CASE("fox-milnor three-valued verdicts") {
  // 2 - t - 1/t = (t - 1)(1/t - 1): passes with f = t - 1
  Laurent1 sq;
  sq.set(0, 2);
  sq.set(1, -1);
  sq.set(-1, -1);
  auto r = audit::fox_milnor(sq);
  CHECK(r.verdict == audit::FoxMilnorResult::Verdict::Passes);
  Laurent1 want;
  want.set(1, 1);
  want.set(0, -1);
  CHECK(r.factor == want);

  // trefoil fails: ab = +-1 forces a^2+b^2 = -+1, impossible
  Laurent1 tref;
  tref.set(-1, 1);
  tref.set(0, -1);
  tref.set(1, 1);
  CHECK(audit::fox_milnor(tref).verdict ==
        audit::FoxMilnorResult::Verdict::Fails);

  // span beyond the bound is an honest undecided
  Laurent1 wide;
  wide.set(-5, 1);
  wide.set(0, -1);
  wide.set(5, 1);
  CHECK(audit::fox_milnor(wide, 8).verdict ==
        audit::FoxMilnorResult::Verdict::Undecided);
}

TEST_CASE("unknotting bounds from pages") {
  auto d = knotio::catalog_get("trefoil_r");
  auto c = khcomplex::build_complex(d, khcomplex::Theory::Lee);
  auto p = lee::compute_pages(c);
  CHECK(audit::unknotting_lower_bound(p) == 1);

  auto u = knotio::parse_pd("UNKNOT");
  auto cu = khcomplex::build_complex(u, khcomplex::Theory::Lee);
  CHECK(audit::unknotting_lower_bound(lee::compute_pages(cu)) == 0);

  std::vector<audit::Certificate> forced{{2, {1, 1}, {2, 9}}};
  CHECK(audit::unknotting_lower_bound(forced) == 3);
}

TEST_CASE("audit agreement: solver verdict matches the page route") {
  for (auto& name : {"trefoil_r", "figure8", "5_2", "6_1", "8_20"}) {
    auto d = knotio::catalog_get(name);
    auto c = khcomplex::build_complex(d, khcomplex::Theory::Lee);
    auto p = lee::compute_pages(c);
    int s = lee::s_invariant(p);
    auto kh = khcomplex::khovanov_homology(d);
    auto rep = audit::knight_move_solve(kh.poincare_series(), s);
    bool degenerate = true;
    for (auto& pg : p.pages)
      if (pg.n >= 2 && pg.total_rank() > 0) degenerate = false;
    CHECK(rep.holds == degenerate);
    // leftover totals match twice the higher-family coefficients
    auto dec = lee::decomposition_from_pages(p, kh.poincare_series());
    int higher = 0;
    for (auto& [l, f] : dec.f)
      if (l >= 2)
        for (auto& [k, coef] : f.terms())
          higher += static_cast<int>(coef);
    auto leftover = audit::max_knight_matching(kh, s);
    CHECK(leftover.total() == 2 * higher);
  }
}
