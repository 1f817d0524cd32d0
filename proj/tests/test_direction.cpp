#include <algorithm>
#include <map>
#include <memory>
#include <vector>

#include "bldg/direction.hpp"
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

TEST_CASE("building a direction validates its inputs") {
  auto b = build_thin(sym3_matrix());
  const CoxeterSystem& sys = b->system();
  ApartmentChart chart(b, b->base());
  // Torsion periods fail the straightness certificate: (s0 s1)^3 = e.
  CHECK_THROWS_WITH_AS(
      make_direction(chart, b->base(), sys.element(Word{0, 1}), 2),
      doctest::Contains("straightness certificate"), Error);
  CHECK_THROWS_AS(
      make_direction(chart, b->base(), sys.element(Word{0}), 2), Error);

  auto tree = build_tree(3, 3);
  const GroupElement u = tree->system().element(Word{0, 1});
  ApartmentChart tchart(tree, tree->base());
  CHECK_THROWS_AS(make_direction(tchart, tree->base(), u, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      make_direction(tchart, tree->base(),
                     tree->system().element(Word{}), 2),
      std::invalid_argument);
  const ChamberId off = tree->panel(tree->base(), 0)[1];
  CHECK_THROWS_AS(make_direction(tchart, off, u, 2), std::invalid_argument);
  // A period from a foreign system is rejected before any computation.
  CHECK_THROWS_AS(
      make_direction(tchart, tree->base(), b->system().element(Word{0}), 2),
      std::invalid_argument);

  const Direction dir = make_direction(tchart, tree->base(), u, 3);
  CHECK(dir.base() == tree->base());
  CHECK(dir.window() == 3);
  CHECK(dir.period() == u);
  CHECK(dir.axis_chamber(0) == tree->base());
  CHECK(dir.period_power(4) ==
        tree->system().element(Word{0, 1, 0, 1, 0, 1, 0, 1}));
  CHECK_THROWS_AS(dir.axis_chamber(4), std::invalid_argument);
  CHECK_THROWS_AS(dir.axis_chamber(-1), std::invalid_argument);
  CHECK_THROWS_AS(dir.period_power(5), std::invalid_argument);
  CHECK(&walls_eta(dir) == &dir.walls());
}

TEST_CASE("a tree direction has no invariant walls and one class per ball") {
  auto b = build_tree(3, 3);
  const Direction dir = direction_on(b, Word{0, 1}, 4);
  CHECK(walls_eta(dir).empty());

  // Axis chambers march away from the base two steps per period.
  for (int n = 0; n <= 4; ++n)
    CHECK(b->distance(b->base(), dir.axis_chamber(n)) == 2 * n);

  const std::vector<ChamberId> ball = b->ball(b->base(), 2);
  CHECK(ball.size() == 13);
  for (ChamberId x : ball) CHECK(phi_equal(b->base(), x, dir));
  std::vector<ChamberId> sorted = ball;
  std::sort(sorted.begin(), sorted.end());
  CHECK(phi_class(b->base(), dir, 2) == sorted);
  CHECK_THROWS_AS(phi_class(dir.axis_chamber(4), dir, 2),
                  std::invalid_argument);

  // Every chamber gets a straight ray, and materializing it walks a gallery
  // that never doubles back.
  for (ChamberId x : ball) {
    CgrRay ray = straight_surrogate(x, dir, 3);
    CHECK(ray.origin() == x);
    CHECK(is_cgr(ray, dir));
    const std::vector<ChamberId> walk = materialize_ray(ray, 2);
    CHECK(walk.size() == ray.prefix.size() + 4);
    CHECK(is_cgr(walk, *ray.chart));
    CHECK(same_limit(ray, ray, dir));
  }
}

TEST_CASE("tree rays extend through a chamber exactly on its geodesic") {
  auto b = build_tree(3, 3);
  const Direction dir = direction_on(b, Word{0, 1}, 4);
  // Far along the axis, membership of y in the geodesic ray [x, eta) is the
  // usual distance-additivity statement through y.
  const ChamberId far = dir.axis_chamber(4);
  const std::vector<ChamberId> ball = b->ball(b->base(), 2);
  int witnesses = 0;
  for (ChamberId x : ball)
    for (ChamberId y : ball) {
      const bool on_ray =
          b->distance(x, far) == b->distance(x, y) + b->distance(y, far);
      const ExtendVerdict v = extend_to_cgr(x, y, dir, 3);
      CHECK(v.witness() == on_ray);
      if (on_ray) {
        ++witnesses;
        REQUIRE(v.ray.has_value());
        CHECK(v.definite);
        CHECK(v.ray->origin() == x);
        CHECK(std::find(v.ray->prefix.begin(), v.ray->prefix.end(), y) !=
              v.ray->prefix.end());
        CHECK(is_cgr(*v.ray, dir));
      }
    }
  CHECK(witnesses > static_cast<int>(ball.size()));  // x == y always extends
}

TEST_CASE("a singular direction grows its wall ladder with the window") {
  auto b = build_thin(a2_tilde_matrix());
  const Word period{0, 1, 2, 0, 1, 2};
  CHECK(direction_on(b, period, 1).walls().size() == 1);
  CHECK(direction_on(b, period, 2).walls().size() == 2);
  const Direction d3 = direction_on(b, period, 3);
  CHECK(d3.walls().size() == 3);
  const Direction d4 = direction_on(b, period, 4);
  CHECK(d4.walls().size() >= 4);
  CHECK(d4.is_direction_wall(Word{1}));
  CHECK(d4.is_direction_wall(Word{0, 2, 0}));
  CHECK(d4.is_direction_wall(Word{1, 0, 2, 0, 1}));
  CHECK(d4.is_direction_wall(Word{0, 2, 0, 1, 0, 2, 0}));
  CHECK_FALSE(d4.is_direction_wall(Word{0}));
  // The whole ladder is invariant under a single period, and the wall list
  // comes out ShortLex sorted.
  for (const DirectionWall& dw : d4.walls()) CHECK(dw.period == 1);
  CHECK(std::is_sorted(d4.walls().begin(), d4.walls().end(),
                       [](const DirectionWall& a, const DirectionWall& b) {
                         return a.wall < b.wall;
                       }));

  // A straight period transverse to every wall keeps none of them.
  const Direction skew = direction_on(b, Word{1, 2, 1, 0}, 3);
  CHECK(skew.walls().empty());
  std::vector<ChamberId> ball = b->ball(b->base(), 2);
  std::sort(ball.begin(), ball.end());
  CHECK(phi_class(b->base(), skew, 2) == ball);
}

TEST_CASE("direction walls stripe the flat into equivalence classes") {
  auto b = build_thin(a2_tilde_matrix());
  const CoxeterSystem& sys = b->system();
  const Direction dir = direction_on(b, Word{0, 1, 2, 0, 1, 2}, 4);
  ApartmentChart flat(b, b->base());
  const auto id = [&](const Word& w) { return flat.chamber_at(w); };

  // The first ladder wall separates the base stripe from the next one.
  CHECK(phi_equal(id({}), id({0}), dir));
  CHECK(phi_equal(id({}), id({2}), dir));
  CHECK(phi_equal(id({0}), id({2}), dir));
  CHECK_FALSE(phi_equal(id({}), id({1}), dir));
  CHECK_FALSE(phi_equal(id({}), id({1, 0}), dir));
  CHECK(phi_equal(id({1}), id({1, 0}), dir));

  // Exhaustively: components scanned with two rings of slack partition the
  // inner ball exactly like pairwise equivalence, so the relation is
  // transitive there.  The slack matters: balls are not convex, and a
  // stripe can need a detour through deeper chambers to reconnect.
  const std::vector<ChamberId> ball = b->ball(b->base(), 3);
  CHECK(ball.size() == 19);
  std::map<ChamberId, int> component;
  int next = 0;
  for (ChamberId x : ball) {
    if (component.contains(x)) continue;
    for (ChamberId y : phi_class(x, dir, 5)) component[y] = next;
    ++next;
  }
  CHECK(next > 1);
  for (ChamberId x : ball)
    for (ChamberId y : ball)
      CHECK(phi_equal(x, y, dir) == (component.at(x) == component.at(y)));
}

TEST_CASE("surrogate rays land in the class of their origin") {
  auto b = build_thin(a2_tilde_matrix());
  const Direction dir = direction_on(b, Word{0, 1, 2, 0, 1, 2}, 3);
  const std::vector<ChamberId> ball = b->ball(b->base(), 2);
  std::vector<CgrRay> rays;
  for (ChamberId x : ball) {
    CgrRay ray = straight_surrogate(x, dir, 2);
    CHECK(ray.origin() == x);
    CHECK(is_cgr(ray, dir));
    // A ray that crosses no direction wall keeps its whole prefix in the
    // class of its origin.
    for (ChamberId c : ray.prefix) CHECK(phi_equal(x, c, dir));
    rays.push_back(std::move(ray));
  }
  for (std::size_t i = 0; i < ball.size(); ++i)
    for (std::size_t j = 0; j < ball.size(); ++j)
      CHECK(same_limit(rays[i], rays[j], dir) ==
            phi_equal(ball[i], ball[j], dir));
}

TEST_CASE("a thick pentagon direction keeps one commuting wall") {
  auto b = build_graph_product(pentagon_matrix(), {3, 3, 3, 3, 3});
  const Direction dir = direction_on(b, Word{0, 2}, 3);
  REQUIRE(dir.walls().size() == 1);
  CHECK(dir.is_direction_wall(Word{1}));
  CHECK(dir.walls().front().period == 1);

  const ChamberId base = b->base();
  const std::vector<ChamberId> panel1 = b->panel(base, 1);
  REQUIRE(panel1.size() == 3);
  std::vector<ChamberId> mates;
  for (ChamberId c : panel1)
    if (c != base) mates.push_back(c);

  // The wall cuts between the base and both of its s1-mates...
  CHECK_FALSE(phi_equal(base, mates[0], dir));
  CHECK_FALSE(phi_equal(base, mates[1], dir));
  // ...while panels transverse to it stay in the base class.
  CHECK(phi_equal(base, b->panel(base, 0)[1], dir));
  CHECK(phi_equal(base, b->panel(base, 3)[1], dir));
  // No apartment can hold two mates of one panel together with the axis
  // tail: every minimal gallery from the axis enters the panel through its
  // gate, and a thin apartment has no room for gate plus two mates.
  CHECK_THROWS_WITH_AS(phi_equal(mates[0], mates[1], dir),
                       doctest::Contains("no common compatible chart"),
                       HorizonError);

  // In ball(1) the class of the base is everything but the two mates.
  const std::vector<ChamberId> cls = phi_class(base, dir, 1);
  CHECK(cls.size() == 9);
  CHECK(std::find(cls.begin(), cls.end(), mates[0]) == cls.end());
  CHECK(std::find(cls.begin(), cls.end(), mates[1]) == cls.end());

  // Rays can cross the wall once in their prefix, in either direction.
  const ExtendVerdict inward = extend_to_cgr(mates[0], base, dir, 3);
  REQUIRE(inward.witness());
  CHECK(inward.definite);
  CHECK(is_cgr(*inward.ray, dir));
  const ExtendVerdict outward = extend_to_cgr(base, mates[0], dir, 3);
  REQUIRE(outward.witness());
  CHECK(is_cgr(*outward.ray, dir));

  // Tail sides tell the two limit classes apart.
  CgrRay from_base = straight_surrogate(base, dir, 3);
  CgrRay from_mate = straight_surrogate(mates[0], dir, 3);
  CHECK(same_limit(from_base, *inward.ray, dir));
  CHECK_FALSE(same_limit(from_base, *outward.ray, dir));
  CHECK_FALSE(same_limit(from_base, from_mate, dir));
  CHECK(same_limit(from_mate, *outward.ray, dir));
  CHECK(same_limit(from_mate, from_mate, dir));
}

TEST_CASE("ray checks reject malformed galleries") {
  auto b = build_thin(sym3_matrix());
  ApartmentChart chart(b, b->base());
  const ChamberId e = chart.center();
  const ChamberId c0 = chart.chamber_at(Word{0});
  const ChamberId c01 = chart.chamber_at(Word{0, 1});

  CHECK(is_cgr(std::vector<ChamberId>{}, chart));
  CHECK(is_cgr(std::vector<ChamberId>{e}, chart));
  CHECK(is_cgr(std::vector<ChamberId>{e, c0, c01}, chart));
  // Doubling straight back recrosses the first wall.
  CHECK_FALSE(is_cgr(std::vector<ChamberId>{e, c0, e}, chart));
  CHECK_THROWS_AS(is_cgr(std::vector<ChamberId>{e, c01}, chart),
                  std::invalid_argument);
  CHECK_THROWS_AS(is_cgr(std::vector<ChamberId>{e, c0, c0}, chart),
                  std::invalid_argument);

  ApartmentChart bare(b, b->base());
  const ChamberId outside = b->panel(b->base(), 0)[1];
  CHECK_THROWS_WITH_AS(is_cgr(std::vector<ChamberId>{b->base(), outside}, bare),
                       doctest::Contains("not in the chart"), Error);

  auto tree = build_tree(3, 3);
  const Direction dir = direction_on(tree, Word{0, 1}, 2);
  CgrRay ray = straight_surrogate(tree->base(), dir, 2);
  CHECK_THROWS_AS(materialize_ray(ray, -1), std::invalid_argument);
  CgrRay chartless = ray;
  chartless.chart.reset();
  CHECK_THROWS_AS(materialize_ray(chartless, 1), std::invalid_argument);
  CgrRay foreign = ray;
  foreign.period = tree->system().identity();
  CHECK_THROWS_AS(same_limit(ray, foreign, dir), std::invalid_argument);
}
