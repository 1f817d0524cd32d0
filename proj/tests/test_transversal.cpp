#include <algorithm>
#include <memory>
#include <vector>

#include "bldg/transversal.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace bldg;
using namespace bldg_test;

namespace {

Direction direction_on(std::shared_ptr<Building> b, const Word& period,
                       int window) {
  ApartmentChart chart(b, b->base());
  const GroupElement u = b->system().element(period);
  return make_direction(chart, b->base(), u, window);
}

}  // namespace

TEST_CASE("a tree direction collapses every ball to a single class") {
  auto b = build_tree(3, 3);
  const Direction dir = direction_on(b, Word{0, 1}, 4);
  const TransversalSystem classes = transversal_chambers(dir, 3);
  CHECK(classes.radius() == 3);
  CHECK(classes.scan_radius() == 5);
  REQUIRE(classes.chambers().size() == 1);
  CHECK(classes.base_class() == 0);
  CHECK(classes.chamber(0).representative == b->base());
  CHECK(classes.chamber(0).stabilized);
  CHECK(classes.chamber(0).sides.empty());
  CHECK(classes.adjacent_classes().empty());
  CHECK(classes.skipped_pairs() == 0);

  std::vector<ChamberId> scan = b->ball(b->base(), 5);
  std::sort(scan.begin(), scan.end());
  CHECK(classes.members(0) ==
        [&] {
          std::vector<ChamberId> inner = b->ball(b->base(), 3);
          std::sort(inner.begin(), inner.end());
          return inner;
        }());
  for (ChamberId c : scan) CHECK(classes.class_of(c) == 0);
  CHECK(!classes.class_of(-1).has_value());
}
