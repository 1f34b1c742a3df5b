#include <doctest.h>

#include "khv/catalog.hpp"
#include "khv/errors.hpp"

using namespace khv;

TEST_CASE("catalog lookups") {
  CHECK(knotio::catalog_get("unknot").size() == 0);
  CHECK(knotio::catalog_get("trefoil_r").writhe() == 3);
  CHECK(knotio::catalog_get("trefoil_r").size() == 3);
  CHECK(knotio::catalog_get("figure8").size() == 4);
  CHECK_THROWS_AS(knotio::catalog_get("no_such_knot"), ValidationError);
}

TEST_CASE("every bundled entry validates as a diagram") {
  for (auto& name : knotio::catalog_names()) {
    auto d = knotio::catalog_get(name);
    CHECK(d.is_knot());
    CHECK(d.n_plus() + d.n_minus() == static_cast<int>(d.size()));
  }
}

TEST_CASE("the bundled K passes the validation oracle") {
  auto d = knotio::catalog_get("K_paper");
  CHECK(d.size() == 38);
  CHECK(d.is_knot());
  // catalog_get already ran validate_k; run it once more explicitly
  knotio::validate_k(d);
  // alias
  CHECK(knotio::catalog_get("K").size() == 38);
}
