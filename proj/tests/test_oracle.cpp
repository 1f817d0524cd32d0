#include "bldg/coxeter.hpp"
#include "bldg/oracle.hpp"
#include "doctest.h"

using namespace bldg;

namespace {

CoxeterMatrix a2_tilde() {
  return CoxeterMatrix(3, {1, 3, 3, 3, 1, 3, 3, 3, 1});
}

CoxeterMatrix pentagon() {
  std::vector<int> e(25, 0);
  for (int i = 0; i < 5; ++i) {
    e[static_cast<std::size_t>(i) * 5 + i] = 1;
    e[static_cast<std::size_t>(i) * 5 + (i + 1) % 5] = 2;
    e[static_cast<std::size_t>((i + 1) % 5) * 5 + i] = 2;
  }
  return CoxeterMatrix(5, std::move(e));
}

}  // namespace

TEST_CASE("matrix reference support detection") {
  CHECK(oracle_supported(CoxeterMatrix::dihedral(3)));
  CHECK(oracle_supported(CoxeterMatrix::dihedral(0)));
  CHECK(oracle_supported(a2_tilde()));
  CHECK(oracle_supported(pentagon()));
  CHECK(!oracle_supported(CoxeterMatrix::dihedral(4)));
  CHECK(!oracle_supported(CoxeterMatrix::dihedral(5)));
}

TEST_CASE("matrix reference enumerates the symmetric group on three letters") {
  const auto ball = oracle_ball(CoxeterMatrix::dihedral(3), 10);
  const std::vector<Word> expect = {{},     {0},    {1},
                                    {0, 1}, {1, 0}, {0, 1, 0}};
  CHECK(ball == expect);
}

TEST_CASE("matrix reference normal forms") {
  CHECK(oracle_normal_form(CoxeterMatrix::dihedral(3), {0, 1, 0, 1}) ==
        Word{1, 0});
  CHECK(oracle_normal_form(CoxeterMatrix::dihedral(3), {0, 0}) == Word{});
  CHECK(oracle_normal_form(CoxeterMatrix::dihedral(0), {0, 1, 1, 0}) ==
        Word{});
  CHECK(oracle_normal_form(a2_tilde(), {1, 0, 1}) == Word{0, 1, 0});
  CHECK(oracle_normal_form(pentagon(), {1, 0}) == Word{0, 1});
  CHECK(oracle_normal_form(pentagon(), {2, 0}) == Word{2, 0});
}

TEST_CASE("matrix reference ball sizes") {
  CHECK(oracle_ball(CoxeterMatrix::dihedral(0), 3).size() == 7);
  CHECK(oracle_ball(a2_tilde(), 4).size() == 31);
  CHECK(oracle_ball(pentagon(), 2).size() == 21);
}

TEST_CASE("both word problem backends agree with the matrix reference") {
  for (const auto& m : {CoxeterMatrix::dihedral(3), CoxeterMatrix::dihedral(0),
                        a2_tilde(), pentagon()}) {
    CoxeterSystem W(m);
    const auto ref = oracle_ball(m, 4);
    const auto got = W.ball(4);
    REQUIRE(got.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i)
      CHECK(got[i].word() == ref[i]);
  }
}