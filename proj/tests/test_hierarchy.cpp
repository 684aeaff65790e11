#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cichirp/hierarchy.hpp"

using namespace cichirp;

TEST_CASE("ado count is the binomial C(n_modes + depth, depth)") {
  CHECK(count_ados(4, 4) == 70);
  CHECK(count_ados(2, 4) == 15);
  CHECK(count_ados(2, 2) == 6);
  CHECK(count_ados(1, 6) == 7);
  CHECK(count_ados(3, 0) == 1);
  CHECK(count_ados(0, 5) == 1);
}

TEST_CASE("table enumerates every multi-index up to the depth exactly once") {
  const HierarchyTable t(3, 3);
  CHECK(t.size() == static_cast<int>(count_ados(3, 3)));
  CHECK(t.n_modes() == 3);
  CHECK(t.depth() == 3);

  // tier 0 comes first and tiers never decrease
  CHECK(t.tier(0) == 0);
  for (int a = 1; a < t.size(); ++a) CHECK(t.tier(a) >= t.tier(a - 1));

  for (int a = 0; a < t.size(); ++a) {
    int sum = 0;
    for (int k = 0; k < 3; ++k) sum += t.occupation(a, k);
    CHECK(sum == t.tier(a));
    CHECK(sum <= 3);
  }
}

TEST_CASE("raising and lowering links are mutually inverse") {
  const HierarchyTable t(4, 3);
  for (int a = 0; a < t.size(); ++a) {
    for (int k = 0; k < 4; ++k) {
      const int u = t.up(a, k);
      if (u >= 0) {
        CHECK(t.tier(u) == t.tier(a) + 1);
        CHECK(t.occupation(u, k) == t.occupation(a, k) + 1);
        CHECK(t.down(u, k) == a);
      } else {
        CHECK(t.tier(a) == 3);  // only the top tier lacks raised neighbors
      }
      const int d = t.down(a, k);
      if (t.occupation(a, k) == 0) {
        CHECK(d == -1);
      } else {
        CHECK(t.up(d, k) == a);
      }
    }
  }
}

TEST_CASE("depth zero keeps a single ado with no neighbors") {
  const HierarchyTable t(2, 0);
  CHECK(t.size() == 1);
  CHECK(t.up(0, 0) == -1);
  CHECK(t.up(0, 1) == -1);
  CHECK(t.down(0, 0) == -1);
}

TEST_CASE("enumeration order is deterministic") {
  const HierarchyTable a(3, 4);
  const HierarchyTable b(3, 4);
  REQUIRE(a.size() == b.size());
  for (int i = 0; i < a.size(); ++i) {
    for (int k = 0; k < 3; ++k) CHECK(a.occupation(i, k) == b.occupation(i, k));
  }
}
