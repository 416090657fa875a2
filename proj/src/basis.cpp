#include "rydpol/basis.hpp"

#include <stdexcept>

namespace rydpol {

bool LevelSpec::valid(HalfInt I) const {
  HalfInt Lh = HalfInt::from_int(L);
  if (!triangle_ok(Lh, S, J)) return false;
  if (F_resolved && !triangle_ok(J, I, *F_resolved)) return false;
  return true;
}

void LadderSpec::validate() const {
  if (levels.size() != 4)
    throw std::invalid_argument("ladder must have exactly four levels (g, i, r1, r2)");
  for (const auto& lvl : levels) {
    if (!lvl.valid(nuclear_spin))
      throw std::invalid_argument("invalid quantum numbers for level '" + lvl.label + "'");
  }
}

std::vector<HalfInt> level_f_values(const LevelSpec& level, HalfInt I) {
  if (level.F_resolved) return {*level.F_resolved};
  std::vector<HalfInt> fs;
  HalfInt fmin = (level.J - I).abs();
  HalfInt fmax = level.J + I;
  for (int tf = fmin.twice(); tf <= fmax.twice(); tf += 2) fs.emplace_back(tf);
  return fs;
}

int level_state_count(const LevelSpec& level, HalfInt I) {
  int n = 0;
  for (HalfInt F : level_f_values(level, I)) n += F.twice() + 1;
  return n;
}

std::vector<HyperfineState> enumerate_basis(const LadderSpec& ladder) {
  ladder.validate();
  std::vector<HyperfineState> basis;
  for (int li = 0; li < 4; ++li) {
    for (HalfInt F : level_f_values(ladder.levels[li], ladder.nuclear_spin)) {
      for (int tm = -F.twice(); tm <= F.twice(); tm += 2)
        basis.push_back({li, F, HalfInt(tm)});
    }
  }
  if (ladder.dummy_state_included)
    basis.push_back({-1, HalfInt(0), HalfInt(0)});
  return basis;
}

LadderSpec preset(const std::string& name) {
  const HalfInt half(1), three_half(3), five_half(5);
  if (name == "type1") {
    // S1/2(F=2) - P3/2(F=3) - D5/2 - P3/2, I = 3/2
    return LadderSpec{
        "type1",
        three_half,
        {
            {"g", half, 0, half, HalfInt::from_int(2), 0.0},
            {"i", half, 1, three_half, HalfInt::from_int(3), 0.0},
            {"r1", half, 2, five_half, std::nullopt, 0.0},
            {"r2", half, 1, three_half, std::nullopt, 0.0},
        },
        true};
  }
  if (name == "type2") {
    // S1/2(F=2) - P3/2(F=3) - D3/2 - P1/2, I = 3/2
    return LadderSpec{
        "type2",
        three_half,
        {
            {"g", half, 0, half, HalfInt::from_int(2), 0.0},
            {"i", half, 1, three_half, HalfInt::from_int(3), 0.0},
            {"r1", half, 2, three_half, std::nullopt, 0.0},
            {"r2", half, 1, half, std::nullopt, 0.0},
        },
        true};
  }
  if (name == "model_atom") {
    // Integer-spin analogue reproducing the 3,1,3,1 degeneracy pattern:
    // J = 1, 0, 1, 0 with S = 0 (so L = J) and no nuclear spin.
    const HalfInt zero(0), one(2);
    return LadderSpec{
        "model_atom",
        zero,
        {
            {"g", zero, 1, one, std::nullopt, 0.0},
            {"i", zero, 0, zero, std::nullopt, 0.0},
            {"r1", zero, 1, one, std::nullopt, 0.0},
            {"r2", zero, 0, zero, std::nullopt, 0.0},
        },
        true};
  }
  throw std::invalid_argument("unknown preset '" + name +
                              "'; valid presets: type1, type2, model_atom");
}

std::vector<std::string> preset_names() { return {"type1", "type2", "model_atom"}; }

}  // namespace rydpol
