#include <memory>
#include <vector>

#include "bldg/apartment.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace bldg;
using namespace bldg_test;

TEST_CASE("a thin chart reproduces the group") {
  auto b = build_thin(sym3_matrix());
  ApartmentChart chart(b, b->base());
  CHECK(chart.center() == b->base());
  CHECK(chart.size() == 1);
  for (const GroupElement& g : b->system().ball(3)) {
    const ChamberId c = chart.chamber_at(g.word());
    CHECK(b->chamber_element(c).word() == g.word());
  }
  CHECK(chart.size() == 6);
  CHECK(chart.at(Word{0, 1, 0}) == chart.chamber_at(Word{1, 0, 1}));
}

TEST_CASE("charts embed Weyl-isometrically") {
  auto b = build_graph_product(pentagon_matrix(), {3, 3, 3, 3, 3});
  const CoxeterSystem& sys = b->system();
  ApartmentChart chart(b, b->base());
  std::vector<Word> coords;
  for (const GroupElement& g : sys.ball(3)) coords.push_back(g.word());
  for (const Word& w : coords) chart.chamber_at(w);
  CHECK(chart.size() == coords.size());
  for (const Word& u : coords)
    for (const Word& v : coords) {
      Word rel(u.rbegin(), u.rend());
      rel.insert(rel.end(), v.begin(), v.end());
      CHECK(b->delta_word(chart.at(u), chart.at(v)) == sys.normal_form(rel));
    }
}

TEST_CASE("extending a chart to targets forces their coordinates") {
  auto b = build_tree(3, 3);
  ApartmentChart chart(b, b->base());
  const auto far = b->ball(b->base(), 3).back();
  extend_apartment(chart, {far, far});
  REQUIRE(chart.has_chamber(far));
  CHECK(*chart.coord_of(far) == b->delta_word(b->base(), far));
  // Re-extending with already-covered chambers changes nothing.
  const std::size_t size = chart.size();
  extend_apartment(chart, {far, chart.center()});
  CHECK(chart.size() == size);
}

TEST_CASE("no apartment holds two chambers of one panel at one coordinate") {
  auto b = build_graph_product(pentagon_matrix(), {3, 3, 3, 3, 3});
  const auto panel = b->panel(b->base(), 0);
  REQUIRE(panel.size() == 3);
  ApartmentChart chart(b, b->base());
  CHECK_THROWS_WITH_AS(extend_apartment(chart, {panel[1], panel[2]}),
                       doctest::Contains("no apartment found within horizon"),
                       HorizonError);
  // A placement that contradicts the Weyl metric is rejected outright.
  ApartmentChart other(b, b->base());
  CHECK_THROWS_WITH_AS(other.place(panel[1], Word{1}),
                       doctest::Contains("not Weyl-isometric"), HorizonError);
}

TEST_CASE("retraction fixes the chart and preserves base distances") {
  auto b = build_graph_product(pentagon_matrix(), {3, 3, 3, 3, 3});
  ApartmentChart chart(b, b->base());
  for (ChamberId d : b->ball(b->base(), 2)) {
    const ChamberId img = retraction(chart, b->base(), d);
    CHECK(b->distance(b->base(), img) == b->distance(b->base(), d));
    CHECK(chart.coord_of(img).has_value());
  }
  // Chart chambers are fixed points.
  for (const auto& [coord, c] : chart.entries())
    CHECK(retraction(chart, b->base(), c) == c);
}

TEST_CASE("retraction needs its center inside the chart") {
  auto b = build_thin(sym3_matrix());
  ApartmentChart chart(b, b->base());
  const ChamberId outside = b->panel(b->base(), 0)[1];
  CHECK_THROWS_WITH_AS(retraction(chart, outside, b->base()),
                       doctest::Contains("must lie in the chart"), Error);
}

TEST_CASE("charts over truncated data admit only certified placements") {
  auto gp = build_tree(3, 3);
  const BallSnapshot snap = snapshot_ball(*gp, 5);
  auto loaded = load_snapshot(snap, gp->system_ptr(), 5);
  // Shallow coordinates can be certified against the whole chart.
  ApartmentChart chart(loaded, loaded->base());
  for (ChamberId d : loaded->ball(loaded->base(), 2))
    retraction(chart, loaded->base(), d);
  // Along a single ray every pairwise check stays inside the data, so a
  // fresh chart reaches the boundary...
  ApartmentChart ray(loaded, loaded->base());
  const Word deep{0, 1, 0, 1, 0};
  ray.chamber_at(deep);
  // ...after which a chamber on the opposite side cannot be certified,
  CHECK_THROWS_AS(ray.chamber_at(Word{1}), TruncationError);
  // and one past the boundary is out of reach, reported as a horizon.
  Word past = deep;
  past.push_back(1);
  CHECK_THROWS_WITH_AS(ray.chamber_at(past),
                       doctest::Contains("no apartment found within horizon"),
                       HorizonError);
}
