#include <doctest.h>

#include <random>
#include <set>

#include "khv/diagram.hpp"
#include "khv/errors.hpp"

using namespace khv;
using knotio::Diagram;
using knotio::TwistSpec;

TEST_CASE("unknot keyword parses to the empty diagram") {
  Diagram d = knotio::parse_pd("UNKNOT");
  CHECK(d.size() == 0);
  CHECK(d.is_knot());
}

TEST_CASE("three-crossing trefoil code orients consistently") {
  // left-handed trefoil in the usual table convention
  Diagram d = knotio::parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]");
  CHECK(d.size() == 3);
  CHECK(d.components() == 1);
  CHECK(d.n_plus() + d.n_minus() == 3);
  CHECK(d.writhe() == -3);  // all three crossings share a sign
  Diagram m = d.mirrored();
  CHECK(m.writhe() == 3);
}

TEST_CASE("edge occurring once is an incidence error") {
  CHECK_THROWS_AS(knotio::parse_pd("X[1,2,3,4] X[3,4,5,6]"),
                  ValidationError);
}

TEST_CASE("malformed tokens are parse errors") {
  CHECK_THROWS_AS(knotio::parse_pd("Y[1,2,3,4]"), ParseError);
  CHECK_THROWS_AS(knotio::parse_pd("X[1,2,3]"), ParseError);
  CHECK_THROWS_AS(knotio::parse_pd("X[1,2,3,a]"), ParseError);
}

TEST_CASE("comments and whitespace are ignored") {
  Diagram d = knotio::parse_pd(
      "# a trefoil\nX[1,4,2,5]\nX[3,6,4,1] # middle\n X[5,2,6,3]\n");
  CHECK(d.size() == 3);
}

TEST_CASE("braid closures") {
  Diagram tr = knotio::from_braid({1, 1, 1}, 2);
  CHECK(tr.size() == 3);
  CHECK(tr.writhe() == 3);
  CHECK(tr.is_knot());

  // identity-braid closure is a two-component unlink, flagged not fatal
  Diagram u2 = knotio::from_braid({1, -1}, 2);
  CHECK(u2.size() == 2);
  CHECK(u2.components() == 2);

  CHECK_THROWS_AS(knotio::from_braid({3}, 2), ValidationError);
  CHECK(knotio::from_braid({}, 1).size() == 0);
}

TEST_CASE("full twist insertion counts crossings") {
  Diagram tr = knotio::from_braid({1, 1, 1}, 2);
  // k = 1 leaves the diagram unchanged
  TwistSpec one{1, +1, {1}};
  CHECK(knotio::insert_full_twist(tr, one).size() == 3);

  // twist along two edges of the trefoil: 3 + 2 crossings
  TwistSpec two{2, +1, {1, 4}};
  Diagram t2 = knotio::insert_full_twist(tr, two);
  CHECK(t2.size() == 3 + 2 * 1);
  CHECK(t2.is_knot());

  for (int k = 2; k <= 4; ++k) {
    std::vector<int> att;
    for (int e = 1; e <= k; ++e) att.push_back(e);
    TwistSpec spec{k, +1, att};
    Diagram out = knotio::insert_full_twist(tr, spec);
    CHECK(out.size() == 3 + k * (k - 1));
  }

  TwistSpec missing{2, +1, {1, 99}};
  CHECK_THROWS_AS(knotio::insert_full_twist(tr, missing), ValidationError);
  TwistSpec zero{0, +1, {}};
  CHECK_THROWS_AS(knotio::insert_full_twist(tr, zero), ValidationError);
  TwistSpec dup{2, +1, {1, 1}};
  CHECK_THROWS_AS(knotio::insert_full_twist(tr, dup), ValidationError);
}

TEST_CASE("unknot split into two strands and twisted stays unknotted") {
  TwistSpec spec{2, +1, {}};
  Diagram d = knotio::insert_full_twist(Diagram(), spec);
  CHECK(d.size() == 2);
  CHECK(d.is_knot());
  CHECK(d.crossings()[0].sign == d.crossings()[1].sign);
}

TEST_CASE("pd round trip preserves the incidence structure") {
  std::vector<Diagram> samples = {
      knotio::from_braid({1, 1, 1}, 2),
      knotio::from_braid({1, -2, 1, -2}, 3),
      knotio::from_braid({1, 1, 1, 2, -1, 2}, 3),
  };
  for (auto& d : samples) {
    Diagram back = knotio::parse_pd(d.pd_text());
    CHECK(back.isomorphic(d));
    CHECK(back.writhe() == d.writhe());
  }
}

TEST_CASE("strand traversal visits every edge exactly once") {
  Diagram d = knotio::from_braid({1, -2, 1, -2}, 3);
  std::set<int> seen;
  int e = d.crossings()[0].e[0];
  for (size_t k = 0; k < 2 * d.size(); ++k) {
    CHECK(!seen.count(e));
    seen.insert(e);
    e = d.next_edge(e);
  }
  CHECK(seen.size() == 2 * d.size());
}

TEST_CASE("mirror flips all crossing signs") {
  Diagram d = knotio::from_braid({1, 1, 1, 2, -1, 2}, 3);
  Diagram m = d.mirrored();
  CHECK(m.n_plus() == d.n_minus());
  CHECK(m.n_minus() == d.n_plus());
  CHECK(m.mirrored().isomorphic(d));
}

TEST_CASE("girth order processes every crossing once") {
  Diagram d = knotio::from_braid({1, 1, 1, 2, -1, 2}, 3);
  auto ord = knotio::girth_order(d);
  std::set<int> s(ord.begin(), ord.end());
  CHECK(ord.size() == d.size());
  CHECK(s.size() == d.size());
}
