#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rydpol/half_int.hpp"

namespace rydpol {

/// One fine-structure level of the excitation ladder.
struct LevelSpec {
  std::string label;                   // "g", "i", "r1", "r2"
  HalfInt S;
  int L = 0;
  HalfInt J;
  std::optional<HalfInt> F_resolved;   // set when a single hyperfine manifold participates
  double energy_offset = 0.0;          // rad/s, relative scale

  bool valid(HalfInt I) const;
};

/// One hyperfine basis state |level; F, mF>.
struct HyperfineState {
  int level_index = 0;   // index into LadderSpec::levels; -1 for the dummy state
  HalfInt F;
  HalfInt mF;

  bool is_dummy() const { return level_index < 0; }
};

/// The four-level excitation ladder g -> i -> r1 -> r2.
struct LadderSpec {
  std::string name;
  HalfInt nuclear_spin;
  std::vector<LevelSpec> levels;       // ordered g, i, r1, r2
  bool dummy_state_included = true;

  const LevelSpec& g() const { return levels[0]; }
  const LevelSpec& i() const { return levels[1]; }
  const LevelSpec& r1() const { return levels[2]; }
  const LevelSpec& r2() const { return levels[3]; }

  void validate() const;  // throws std::invalid_argument on bad quantum numbers
};

/// Hyperfine F values a level contributes (honors F_resolved).
std::vector<HalfInt> level_f_values(const LevelSpec& level, HalfInt I);

/// Deterministic basis enumeration: by level, then F ascending, then mF
/// ascending; dummy state last when included.
std::vector<HyperfineState> enumerate_basis(const LadderSpec& ladder);

/// Number of states contributed by one level.
int level_state_count(const LevelSpec& level, HalfInt I);

/// Preset ladders: "type1", "type2", "model_atom".
LadderSpec preset(const std::string& name);

std::vector<std::string> preset_names();

}  // namespace rydpol
