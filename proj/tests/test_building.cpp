#include <algorithm>
#include <deque>
#include <memory>
#include <unordered_map>

#include "bldg/building.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace bldg;
using namespace bldg_test;

namespace {

/// Independent distance-and-word oracle: plain breadth-first search over the
/// panel graph, trusting nothing but panel().
struct BfsOracle {
  std::unordered_map<ChamberId, Word> words;

  BfsOracle(Building& b, ChamberId from, int radius) {
    words.emplace(from, Word{});
    std::deque<ChamberId> queue{from};
    while (!queue.empty()) {
      const ChamberId x = queue.front();
      queue.pop_front();
      const Word& wx = words.at(x);
      if (static_cast<int>(wx.size()) >= radius) continue;
      for (int s = 0; s < b.rank(); ++s)
        for (ChamberId y : b.panel(x, s)) {
          if (y == x || words.contains(y)) continue;
          Word wy = wx;
          wy.push_back(static_cast<Letter>(s));
          words.emplace(y, std::move(wy));
          queue.push_back(y);
        }
    }
  }
};

}  // namespace

TEST_CASE("thin building materializes the group") {
  auto b = build_thin(sym3_matrix());
  CHECK(b->ball(b->base(), 10).size() == 6);
  CHECK(b->materialized() == 6);
  for (ChamberId c : b->ball(b->base(), 3))
    for (int s = 0; s < b->rank(); ++s) {
      const auto p = b->panel(c, s);
      REQUIRE(p.size() == 2);
      CHECK(p[0] == c);
    }
  const ChamberId w0 = b->chamber_of(b->system().element({0, 1, 0}));
  CHECK(b->delta(b->base(), w0).word() == Word{0, 1, 0});
  CHECK(b->distance(b->base(), w0) == 3);
  CHECK(b->delta(w0, b->base()) ==
        b->system().inverse(b->delta(b->base(), w0)));
  CHECK(b->chamber_element(w0).word() == Word{0, 1, 0});
  CHECK(b->chamber_label(b->base()) == "e");
}

TEST_CASE("tree building ball sizes") {
  auto b = build_tree(3, 3);
  CHECK(b->ball(0, 0).size() == 1);
  CHECK(b->ball(0, 1).size() == 5);
  CHECK(b->ball(0, 2).size() == 13);
  CHECK(b->ball(0, 5).size() == 125);
  CHECK(b->order_of(0) == 3);
  for (int s = 0; s < 2; ++s) {
    const auto p = b->panel(0, s);
    REQUIRE(p.size() == 3);
    CHECK(p[0] == 0);
    CHECK(b->distance(p[1], p[2]) == 1);
  }
}

TEST_CASE("graph product panels and weyl distance") {
  auto b = build_graph_product(pentagon_matrix(), {3, 3, 3, 3, 3});
  CHECK(b->ball(0, 1).size() == 11);
  CHECK(b->ball(0, 2).size() == 71);
  for (int s = 0; s < 5; ++s) CHECK(b->panel(0, s).size() == 3);

  const ChamberId a1 = b->panel(0, 0)[1];
  const ChamberId a2 = b->panel(0, 0)[2];
  CHECK(b->delta(0, a1).word() == Word{0});
  CHECK(b->delta(a1, a2).word() == Word{0});
  CHECK(b->chamber_label(a2) == "0^2");

  // Generators 0 and 1 commute, so the two-step chamber reads 0.1 whichever
  // panel was crossed first.
  const ChamberId c01 = b->panel(a1, 1)[1];
  CHECK(b->delta(0, c01).word() == Word{0, 1});
  const ChamberId b1 = b->panel(0, 1)[1];
  const ChamberId c10 = b->panel(b1, 0)[1];
  CHECK(b->delta(0, c10).word() == Word{0, 1});

  // Generators 0 and 2 do not commute.
  const ChamberId d2 = b->panel(a1, 2)[1];
  CHECK(b->delta(0, d2).word() == Word{0, 2});
  CHECK(b->distance(0, d2) == 2);
}

TEST_CASE("graph product delta matches breadth-first search") {
  auto check_against_bfs = [](Building& b, ChamberId from, int radius) {
    BfsOracle oracle(b, from, radius);
    for (const auto& [d, w] : oracle.words) {
      CHECK(b.delta_word(from, d) == b.system().normal_form(w));
      CHECK(b.distance(from, d) == static_cast<int>(w.size()));
    }
  };
  auto tree = build_tree(3, 3);
  check_against_bfs(*tree, 0, 4);
  check_against_bfs(*tree, tree->ball(0, 2).back(), 4);

  auto pent = build_graph_product(pentagon_matrix(), {3, 3, 3, 3, 3});
  check_against_bfs(*pent, 0, 3);
  check_against_bfs(*pent, pent->ball(0, 2).back(), 3);
}

TEST_CASE("minimal galleries enumerate reduced types lexicographically") {
  auto thin = build_thin(sym3_matrix());
  const ChamberId w0 = thin->chamber_of(thin->system().element({0, 1, 0}));
  auto galleries = minimal_galleries(*thin, thin->base(), w0);
  REQUIRE(galleries.size() == 2);
  CHECK(galleries[0].type == Word{0, 1, 0});
  CHECK(galleries[1].type == Word{1, 0, 1});
  for (const auto& g : galleries) {
    REQUIRE(g.chambers.size() == 4);
    CHECK(g.chambers.front() == thin->base());
    CHECK(g.chambers.back() == w0);
  }
  CHECK(minimal_galleries(*thin, thin->base(), w0, 1).size() == 1);
  CHECK(minimal_galleries(*thin, thin->base(), w0, 1)[0].type ==
        Word{0, 1, 0});

  // Trees have unique minimal galleries.
  auto tree = build_tree(3, 3);
  const ChamberId far = tree->ball(0, 3).back();
  auto unique_gallery = minimal_galleries(*tree, 0, far);
  REQUIRE(unique_gallery.size() == 1);
  CHECK(unique_gallery[0].chambers.size() == 4);

  // A commuting square in the thick pentagon building has two galleries.
  auto pent = build_graph_product(pentagon_matrix(), {3, 3, 3, 3, 3});
  const ChamberId corner = pent->panel(pent->panel(0, 0)[1], 1)[1];
  auto square = minimal_galleries(*pent, 0, corner);
  REQUIRE(square.size() == 2);
  CHECK(square[0].type == Word{0, 1});
  CHECK(square[1].type == Word{1, 0});
}

TEST_CASE("panel projection is the gate") {
  auto tree = build_tree(3, 3);
  const auto ball3 = tree->ball(0, 3);
  const ChamberId target = ball3.back();
  for (ChamberId c : tree->ball(0, 2))
    for (int s = 0; s < tree->rank(); ++s) {
      const ChamberId gate = proj_panel(*tree, c, s, target);
      const int through_gate = tree->distance(target, gate);
      for (ChamberId m : tree->panel(c, s)) {
        if (m == gate) continue;
        CHECK(tree->distance(target, m) == through_gate + 1);
      }
    }

  auto pent = build_graph_product(pentagon_matrix(), {3, 3, 3, 3, 3});
  const ChamberId far = pent->ball(0, 3).back();
  for (ChamberId c : pent->ball(0, 2))
    for (int s = 0; s < pent->rank(); ++s) {
      const ChamberId gate = proj_panel(*pent, c, s, far);
      const int through_gate = pent->distance(far, gate);
      for (ChamberId m : pent->panel(c, s)) {
        if (m == gate) continue;
        CHECK(pent->distance(far, m) == through_gate + 1);
      }
    }
}

TEST_CASE("convex hulls of chamber pairs") {
  auto thin = build_thin(sym3_matrix());
  const ChamberId w0 = thin->chamber_of(thin->system().element({0, 1, 0}));
  CHECK(conv_chambers(*thin, thin->base(), w0).size() == 6);
  const ChamberId c01 = thin->chamber_of(thin->system().element({0, 1}));
  auto small = conv_chambers(*thin, thin->base(), c01);
  REQUIRE(small.size() == 3);
  CHECK(small[0] == thin->base());

  // Tree hulls are the unique geodesic path.
  auto tree = build_tree(3, 3);
  const ChamberId far = tree->ball(0, 4).back();
  CHECK(conv_chambers(*tree, 0, far).size() == 5);

  // Thick commuting square.
  auto pent = build_graph_product(pentagon_matrix(), {3, 3, 3, 3, 3});
  const ChamberId corner = pent->panel(pent->panel(0, 0)[1], 1)[1];
  CHECK(conv_chambers(*pent, 0, corner).size() == 4);

  // The thin hull agrees with the group-level interval.
  auto a2 = build_thin(a2_tilde_matrix());
  const auto& sys = a2->system();
  const GroupElement g = sys.element({0, 1, 2, 1});
  const ChamberId target = a2->chamber_of(g);
  const auto hull = conv_chambers(*a2, a2->base(), target);
  const auto interval = sys.conv(sys.identity(), g);
  REQUIRE(hull.size() == interval.size());
  std::vector<Word> hull_words;
  for (ChamberId c : hull) hull_words.push_back(a2->chamber_element(c).word());
  std::sort(hull_words.begin(), hull_words.end(), shortlex_less);
  for (std::size_t i = 0; i < interval.size(); ++i)
    CHECK(hull_words[i] == interval[i].word());
}

TEST_CASE("loaded building round trip") {
  auto tree = build_tree(3, 3);
  const auto snap = snapshot_ball(*tree, 4);
  auto loaded = load_snapshot(snap, tree->system_ptr(), 4);
  CHECK(loaded->materialized() == 61);  // 1+4+8+16+32
  CHECK(loaded->declared_radius() == 4);
  CHECK(loaded->chamber_label(7) == "#7");

  // Depths agree with the source building.
  for (std::size_t i = 0; i < snap.original.size(); ++i)
    CHECK(loaded->base_depth(static_cast<ChamberId>(i)) ==
          tree->distance(0, snap.original[i]));

  // Weyl distances from the base agree wherever they are certified.
  for (std::size_t i = 0; i < snap.original.size(); ++i) {
    const ChamberId c = static_cast<ChamberId>(i);
    if (loaded->base_depth(c) <= 4)
      CHECK(loaded->delta_word(0, c) == tree->delta_word(0, snap.original[i]));
  }

  // Interior panels keep their size; the ball itself is reproduced.
  for (ChamberId c : loaded->ball(0, 3))
    if (loaded->base_depth(c) <= 3)
      for (int s = 0; s < 2; ++s) CHECK(loaded->panel(c, s).size() == 3);
  CHECK(loaded->ball(0, 4).size() == 61);
}

TEST_CASE("loaded building truncation guards") {
  auto tree = build_tree(3, 3);
  const auto snap = snapshot_ball(*tree, 3);
  auto loaded = load_snapshot(snap, tree->system_ptr(), 3);

  // A ball around a boundary chamber may be clipped.
  ChamberId deep = -1;
  for (std::int64_t c = 0; c < snap.count; ++c)
    if (loaded->base_depth(c) == 3) deep = c;
  REQUIRE(deep != -1);
  CHECK_THROWS_AS(loaded->ball(deep, 1), TruncationError);
  CHECK(loaded->ball(0, 3).size() == 29);

  // Distances between far boundary chambers cannot be certified.
  ChamberId opposite = -1;
  for (std::int64_t c = 0; c < snap.count && opposite == -1; ++c)
    if (loaded->base_depth(c) == 3 && c != deep &&
        loaded->delta_word(0, c)[0] != loaded->delta_word(0, deep)[0])
      opposite = c;
  REQUIRE(opposite != -1);
  CHECK_THROWS_AS(loaded->delta(deep, opposite), TruncationError);
  // From the base every distance inside the ball is certified.
  CHECK(loaded->distance(0, deep) == 3);
}

TEST_CASE("loaded building rejects malformed data") {
  auto sys = std::make_shared<CoxeterSystem>(dinf_matrix());
  using Groups = std::vector<std::vector<std::vector<ChamberId>>>;

  CHECK_THROWS_AS(LoadedBuilding(sys, 0, 1, Groups{{}, {}}), SpecError);
  CHECK_THROWS_AS(LoadedBuilding(sys, 2, -1, Groups{{}, {}}), SpecError);
  CHECK_THROWS_AS(LoadedBuilding(sys, 2, 1, Groups{{}}), SpecError);
  // Panel entry out of range.
  CHECK_THROWS_AS(LoadedBuilding(sys, 2, 1, Groups{{{0, 5}}, {}}), SpecError);
  // One chamber in two panels of the same generator.
  CHECK_THROWS_AS(
      LoadedBuilding(sys, 3, 2, Groups{{{0, 1}, {1, 2}}, {}}), SpecError);
  // Disconnected chamber.
  CHECK_THROWS_AS(LoadedBuilding(sys, 2, 1, Groups{{}, {}}), SpecError);
  // Depth beyond the declared radius.
  CHECK_THROWS_AS(
      LoadedBuilding(sys, 3, 1, Groups{{{0, 1}}, {{1, 2}}}), SpecError);
  // A valid two-chamber line loads.
  LoadedBuilding ok(sys, 2, 1, Groups{{{0, 1}}, {}});
  CHECK(ok.panel(0, 0) == std::vector<ChamberId>{0, 1});
  CHECK(ok.panel(0, 1) == std::vector<ChamberId>{0});
  CHECK(ok.delta_word(0, 1) == Word{0});
}
