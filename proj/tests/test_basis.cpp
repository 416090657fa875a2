#include <doctest.h>

#include <stdexcept>

#include "rydpol/basis.hpp"

using namespace rydpol;

TEST_CASE("preset state counts") {
  // type1: g 5S1/2 F=2 (5), i 5P3/2 F=3 (7), r1 D5/2 all F (24),
  //        r2 P3/2 all F (16), plus the dummy recycling state.
  auto t1 = preset("type1");
  auto b1 = enumerate_basis(t1);
  CHECK(b1.size() == 53);
  CHECK(level_state_count(t1.g(), t1.nuclear_spin) == 5);
  CHECK(level_state_count(t1.i(), t1.nuclear_spin) == 7);
  CHECK(level_state_count(t1.r1(), t1.nuclear_spin) == 24);
  CHECK(level_state_count(t1.r2(), t1.nuclear_spin) == 16);

  auto t2 = preset("type2");
  CHECK(enumerate_basis(t2).size() == 37);
  // type2 swaps ladder ordering: r1 is P3/2 (16), r2 is S1/2 (8).
  CHECK(level_state_count(t2.r1(), t2.nuclear_spin) == 16);
  CHECK(level_state_count(t2.r2(), t2.nuclear_spin) == 8);

  auto ma = preset("model_atom");
  CHECK(enumerate_basis(ma).size() == 9);
  CHECK(ma.nuclear_spin.twice() == 0);
}

TEST_CASE("enumeration order is level, then F ascending, then mF ascending") {
  auto t1 = preset("type1");
  auto basis = enumerate_basis(t1);
  // First block is the ground level.
  for (int k = 0; k < 5; ++k) {
    CHECK(basis[k].level_index == 0);
    CHECK(basis[k].F.twice() == 4);
    CHECK(basis[k].mF.twice() == 2 * (k - 2));
  }
  // Monotone level index, dummy last.
  int prev_level = 0;
  for (size_t k = 0; k + 1 < basis.size(); ++k) {
    CHECK(basis[k].level_index >= prev_level);
    prev_level = basis[k].level_index;
    CHECK_FALSE(basis[k].is_dummy());
  }
  CHECK(basis.back().is_dummy());

  // Within the r1 block (all F), F is non-decreasing and mF resets.
  int start = 5 + 7;
  HalfInt prev_f = basis[start].F;
  for (int k = start; k < start + 24; ++k) {
    CHECK(basis[k].level_index == 2);
    CHECK(basis[k].F >= prev_f);
    if (basis[k].F > prev_f) {
      CHECK(basis[k].mF == -basis[k].F);
      prev_f = basis[k].F;
    }
  }
}

TEST_CASE("level_f_values honors F_resolved and the triangle range") {
  auto t1 = preset("type1");
  auto fg = level_f_values(t1.g(), t1.nuclear_spin);
  REQUIRE(fg.size() == 1);
  CHECK(fg[0].twice() == 4);

  auto fr1 = level_f_values(t1.r1(), t1.nuclear_spin);
  // J=5/2 with I=3/2: F = 1,2,3,4.
  REQUIRE(fr1.size() == 4);
  CHECK(fr1.front().twice() == 2);
  CHECK(fr1.back().twice() == 8);
}

TEST_CASE("dummy state can be excluded") {
  auto ma = preset("model_atom");
  ma.dummy_state_included = false;
  CHECK(enumerate_basis(ma).size() == 8);
}

TEST_CASE("validation rejects malformed ladders") {
  auto t1 = preset("type1");
  CHECK_NOTHROW(t1.validate());

  auto bad = t1;
  bad.levels[1].J = HalfInt::from_int(3);  // J incompatible with L=1, S=1/2
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = t1;
  bad.levels[0].F_resolved = HalfInt::from_int(9);  // outside |I-J|..I+J
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = t1;
  bad.levels.pop_back();  // ladder must have four levels
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  CHECK_THROWS_AS(preset("no_such_preset"), std::invalid_argument);
}

TEST_CASE("preset_names lists all presets") {
  auto names = preset_names();
  REQUIRE(names.size() == 3);
  for (const auto& n : names) CHECK_NOTHROW(preset(n));
}
