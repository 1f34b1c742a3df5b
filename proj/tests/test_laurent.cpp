#include <doctest.h>

#include <random>

#include "khv/dimtable.hpp"
#include "khv/errors.hpp"
#include "khv/laurent.hpp"

using namespace khv;
using grading::DimTable;
using grading::Laurent1;
using grading::Laurent2;

namespace {

Laurent2 random_l2(std::mt19937& rng) {
  std::uniform_int_distribution<int> nterms(0, 5), expo(-4, 4), coef(-3, 3);
  Laurent2 p;
  int n = nterms(rng);
  for (int k = 0; k < n; ++k) p.add(expo(rng), expo(rng), coef(rng));
  return p;
}

}  // namespace

TEST_CASE("two-variable product expansions") {
  Laurent2 a = Laurent2::monomial(1, 2, 5);  // t^2 q^5
  Laurent2 knight;
  knight.add(0, 0, 1);
  knight.add(1, 4, 1);  // 1 + t q^4
  Laurent2 p = a * knight;
  CHECK(p.coeff(2, 5) == 1);
  CHECK(p.coeff(3, 9) == 1);
  CHECK(p.terms().size() == 2);

  CHECK((a * Laurent2()).is_zero());

  Laurent2 u;
  u.add(0, 1, 1);
  u.add(0, -1, 1);
  Laurent2 sq = u * u;
  CHECK(sq.coeff(0, 2) == 1);
  CHECK(sq.coeff(0, 0) == 2);
  CHECK(sq.coeff(0, -2) == 1);
}

TEST_CASE("product is commutative and associative on random inputs") {
  std::mt19937 rng(20240817);
  for (int trial = 0; trial < 200; ++trial) {
    Laurent2 a = random_l2(rng), b = random_l2(rng), c = random_l2(rng);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
  }
}

TEST_CASE("poincare series and coefficient extraction invert each other") {
  DimTable t;
  t.set(0, -1, 1);
  t.set(0, 1, 1);
  Laurent2 p = t.poincare_series();
  CHECK(p.coeff(0, -1) == 1);
  CHECK(p.coeff(0, 1) == 1);
  CHECK(DimTable().poincare_series().is_zero());

  std::mt19937 rng(7);
  std::uniform_int_distribution<int> expo(-6, 6), dim(1, 9);
  for (int trial = 0; trial < 50; ++trial) {
    DimTable a;
    for (int k = 0; k < 6; ++k) a.set(expo(rng), expo(rng), dim(rng));
    DimTable b;
    grading::Laurent2 series = a.poincare_series();
    for (auto& [key, c] : series.terms())
      b.set(key.first, key.second, static_cast<int>(c));
    CHECK(a == b);
  }
}

TEST_CASE("graded Euler characteristic") {
  DimTable unknot;
  unknot.set(0, -1, 1);
  unknot.set(0, 1, 1);
  Laurent1 e = unknot.graded_euler();
  CHECK(e.coeff(1) == 1);
  CHECK(e.coeff(-1) == 1);
  CHECK(e.terms().size() == 2);

  // trefoil table -> q + q^3 + q^5 - q^9 (matches the hand skein value)
  DimTable tr;
  tr.set(0, 1, 1);
  tr.set(0, 3, 1);
  tr.set(2, 5, 1);
  tr.set(3, 9, 1);
  Laurent1 et = tr.graded_euler();
  CHECK(et.coeff(1) == 1);
  CHECK(et.coeff(3) == 1);
  CHECK(et.coeff(5) == 1);
  CHECK(et.coeff(9) == -1);
}

TEST_CASE("table renderers round-trip through JSON") {
  DimTable t;
  t.set(-2, -5, 1);
  t.set(0, 1, 3);
  t.set(1, 1, 2);
  DimTable back = DimTable::from_json(t.to_json());
  CHECK(back == t);
  CHECK(t.to_csv().find("i,j,dim") == 0);
  CHECK(t.render_grid().find("-5") != std::string::npos);
}

TEST_CASE("table JSON rejects malformed input") {
  CHECK_THROWS_AS(DimTable::from_json("{"), ParseError);
  CHECK_THROWS_AS(DimTable::from_json("{\"i\":0}"), ParseError);
  CHECK_THROWS_AS(DimTable::from_json("[{\"i\":0,\"j\":1,\"dim\":-2}]"),
                  ParseError);
}
