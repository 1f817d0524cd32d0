#include "bldg/classification.hpp"
#include "doctest.h"

using namespace bldg;

namespace {

// Path with the given consecutive bond orders; all other pairs commute.
CoxeterMatrix path(const std::vector<int>& bonds) {
  const int n = static_cast<int>(bonds.size()) + 1;
  std::vector<int> e(static_cast<std::size_t>(n) * n, 2);
  for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i) * n + i] = 1;
  for (int i = 0; i + 1 < n; ++i) {
    e[static_cast<std::size_t>(i) * n + i + 1] = bonds[static_cast<std::size_t>(i)];
    e[static_cast<std::size_t>(i + 1) * n + i] = bonds[static_cast<std::size_t>(i)];
  }
  return CoxeterMatrix(n, std::move(e));
}

// Cycle on n vertices, every bond of the given order.
CoxeterMatrix cycle(int n, int bond) {
  std::vector<int> e(static_cast<std::size_t>(n) * n, 2);
  for (int i = 0; i < n; ++i) {
    e[static_cast<std::size_t>(i) * n + i] = 1;
    e[static_cast<std::size_t>(i) * n + (i + 1) % n] = bond;
    e[static_cast<std::size_t>((i + 1) % n) * n + i] = bond;
  }
  return CoxeterMatrix(n, std::move(e));
}

// Star: vertex 0 joined to every other vertex with the listed orders.
CoxeterMatrix star(const std::vector<int>& bonds) {
  const int n = static_cast<int>(bonds.size()) + 1;
  std::vector<int> e(static_cast<std::size_t>(n) * n, 2);
  for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i) * n + i] = 1;
  for (int i = 1; i < n; ++i) {
    e[static_cast<std::size_t>(0) * n + i] = bonds[static_cast<std::size_t>(i - 1)];
    e[static_cast<std::size_t>(i) * n + 0] = bonds[static_cast<std::size_t>(i - 1)];
  }
  return CoxeterMatrix(n, std::move(e));
}

// Path 0-1-...-(n-2) of all-3 bonds with an extra vertex attached to `at`.
CoxeterMatrix branched(int n, int at) {
  std::vector<int> e(static_cast<std::size_t>(n) * n, 2);
  for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i) * n + i] = 1;
  auto join = [&](int a, int b) {
    e[static_cast<std::size_t>(a) * n + b] = 3;
    e[static_cast<std::size_t>(b) * n + a] = 3;
  };
  for (int i = 0; i + 2 < n; ++i) join(i, i + 1);
  join(at, n - 1);
  return CoxeterMatrix(n, std::move(e));
}

std::string group_name(const CoxeterMatrix& m) {
  return classify_group(m).name();
}

TypeClass group_cls(const CoxeterMatrix& m) { return classify_group(m).cls; }

}  // namespace

TEST_CASE("finite families are recognized") {
  CHECK(group_name(CoxeterMatrix::dihedral(3)) == "A2");
  CHECK(group_name(CoxeterMatrix::dihedral(4)) == "B2");
  CHECK(group_name(CoxeterMatrix::dihedral(6)) == "G2");
  CHECK(group_name(CoxeterMatrix::dihedral(7)) == "I2(7)");
  CHECK(group_name(path({3, 3})) == "A3");
  CHECK(group_name(path({3, 3, 3, 3})) == "A5");
  CHECK(group_name(path({3, 4})) == "B3");
  CHECK(group_name(path({4, 3, 3})) == "B4");
  CHECK(group_name(path({3, 4, 3})) == "F4");
  CHECK(group_name(path({5, 3})) == "H3");
  CHECK(group_name(path({5, 3, 3})) == "H4");
  CHECK(group_name(star({3, 3, 3})) == "D4");
  CHECK(group_name(branched(5, 2)) == "D5");  // fork at the path's end
  CHECK(group_name(branched(6, 2)) == "E6");
  CHECK(group_name(branched(7, 2)) == "E7");
  CHECK(group_name(branched(8, 2)) == "E8");
  for (const auto& m :
       {path({3, 3}), path({3, 4, 3}), path({5, 3, 3}), star({3, 3, 3})})
    CHECK(group_cls(m) == TypeClass::Finite);
}

TEST_CASE("affine families are recognized") {
  CHECK(group_name(CoxeterMatrix::dihedral(0)) == "A~1");
  CHECK(group_name(cycle(3, 3)) == "A~2");
  CHECK(group_name(cycle(6, 3)) == "A~5");
  CHECK(group_name(path({4, 4})) == "C~2");
  CHECK(group_name(path({4, 3, 4})) == "C~3");
  CHECK(group_name(star({3, 3, 4})) == "B~3");
  CHECK(group_name(star({3, 3, 3, 3})) == "D~4");
  CHECK(group_name(path({3, 6})) == "G~2");
  CHECK(group_name(path({3, 3, 4, 3})) == "F~4");
  // Arms (2,2,2) around vertex 2: path 0-1-2-3-4 plus 2-5-6.
  {
    std::vector<int> e(49, 2);
    for (int i = 0; i < 7; ++i) e[static_cast<std::size_t>(i) * 7 + i] = 1;
    auto join = [&](int a, int b) {
      e[static_cast<std::size_t>(a) * 7 + b] = 3;
      e[static_cast<std::size_t>(b) * 7 + a] = 3;
    };
    join(0, 1);
    join(1, 2);
    join(2, 3);
    join(3, 4);
    join(2, 5);
    join(5, 6);
    CHECK(group_name(CoxeterMatrix(7, std::move(e))) == "E~6");
  }
  CHECK(group_name(branched(8, 3)) == "E~7");   // arms 1,3,3
  CHECK(group_name(branched(9, 2)) == "E~8");   // arms 1,2,5
  for (const auto& m : {cycle(3, 3), path({4, 4}), star({3, 3, 4})})
    CHECK(group_cls(m) == TypeClass::Affine);
}

TEST_CASE("double fork diagrams") {
  // 0-1 fork to 2, path 2-3, fork 3 to 4-5: all bonds 3.
  std::vector<int> e(36, 2);
  auto join = [&](int a, int b) {
    e[static_cast<std::size_t>(a) * 6 + b] = 3;
    e[static_cast<std::size_t>(b) * 6 + a] = 3;
  };
  for (int i = 0; i < 6; ++i) e[static_cast<std::size_t>(i) * 6 + i] = 1;
  join(0, 2);
  join(1, 2);
  join(2, 3);
  join(3, 4);
  join(3, 5);
  CHECK(group_name(CoxeterMatrix(6, std::move(e))) == "D~5");
}

TEST_CASE("everything else is indefinite") {
  CHECK(group_cls(cycle(3, 4)) == TypeClass::Indefinite);     // (3,3,4) loop
  CHECK(group_cls(cycle(4, 3)) != TypeClass::Indefinite);     // that's A~3
  CHECK(group_cls(path({5, 3, 3, 3})) == TypeClass::Indefinite);
  CHECK(group_cls(path({7, 3})) == TypeClass::Indefinite);
  CHECK(group_cls(path({3, 0})) == TypeClass::Indefinite);    // infinite bond
  CHECK(group_cls(path({6, 3, 3})) == TypeClass::Indefinite);
  CHECK(group_cls(star({3, 3, 3, 3, 3})) == TypeClass::Indefinite);
  CHECK(group_cls(path({4, 3, 3, 4, 3})) == TypeClass::Indefinite);
  CHECK(group_name(path({3, 0})) == "indefinite");
}

TEST_CASE("reducible groups classify by components") {
  const CoxeterMatrix fin =
      CoxeterMatrix::product(CoxeterMatrix::dihedral(3), path({3, 4}));
  CHECK(group_name(fin) == "A2 x B3");
  CHECK(group_cls(fin) == TypeClass::Finite);

  const CoxeterMatrix aff =
      CoxeterMatrix::product(CoxeterMatrix::dihedral(0), cycle(3, 3));
  CHECK(group_name(aff) == "A~1 x A~2");
  CHECK(group_cls(aff) == TypeClass::Affine);

  // A finite factor next to an affine one is neither finite nor affine.
  const CoxeterMatrix mixed =
      CoxeterMatrix::product(CoxeterMatrix::dihedral(0), path({3}));
  CHECK(group_name(mixed) == "A~1 x A2");
  CHECK(group_cls(mixed) == TypeClass::Indefinite);
}

TEST_CASE("parabolic subsets") {
  const CoxeterMatrix m = path({3, 3, 4});  // B4
  CHECK(classify_parabolic(m, {0, 1}).name() == "A2");
  CHECK(classify_parabolic(m, {0, 2, 3}).name() == "A1 x B2");
  CHECK(classify_parabolic(m, {}).name() == "trivial");
  CHECK(classify_parabolic(m, {}).cls == TypeClass::Finite);
  CHECK_THROWS_AS(classify_parabolic(m, {1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(classify_parabolic(m, {0, 9}), std::invalid_argument);
  const CoxeterMatrix r = restrict_matrix(m, {2, 3});
  CHECK(r.rank() == 2);
  CHECK(r.order(0, 1) == 4);
}

TEST_CASE("hyperbolicity verdicts") {
  // Affine rank three: flagged through its affine subset.
  const auto a2t = is_hyperbolic(cycle(3, 3));
  CHECK(!a2t.hyperbolic);
  CHECK(a2t.affine_obstruction == std::vector<int>{0, 1, 2});

  // Product of two infinite dihedral groups: flagged through the pair.
  const auto prod = is_hyperbolic(
      CoxeterMatrix::product(CoxeterMatrix::dihedral(0),
                             CoxeterMatrix::dihedral(0)));
  CHECK(!prod.hyperbolic);
  CHECK(!prod.product_obstruction_a.empty());
  CHECK(!prod.product_obstruction_b.empty());

  // The pentagonal right-angled group is hyperbolic.
  std::vector<int> e(25, 0);
  for (int i = 0; i < 5; ++i) {
    e[static_cast<std::size_t>(i) * 5 + i] = 1;
    e[static_cast<std::size_t>(i) * 5 + (i + 1) % 5] = 2;
    e[static_cast<std::size_t>((i + 1) % 5) * 5 + i] = 2;
  }
  const auto pent = is_hyperbolic(CoxeterMatrix(5, std::move(e)));
  CHECK(pent.hyperbolic);
  CHECK(pent.summary == "hyperbolic");

  // Infinite dihedral alone is hyperbolic, also with a finite factor.
  CHECK(is_hyperbolic(CoxeterMatrix::dihedral(0)).hyperbolic);
  CHECK(is_hyperbolic(CoxeterMatrix::product(CoxeterMatrix::dihedral(0),
                                             CoxeterMatrix::dihedral(3)))
            .hyperbolic);
  // Finite groups are hyperbolic.
  CHECK(is_hyperbolic(path({3, 4})).hyperbolic);
  // A hyperbolic triangle group.
  CHECK(is_hyperbolic(CoxeterMatrix(3, {1, 3, 7, 3, 1, 3, 7, 3, 1}))
            .hyperbolic);
}