#pragma once

#include <string>
#include <vector>

#include "pslab/orbit.hpp"

namespace pslab {

struct Fixture {
  std::string name;
  GeneratorSet gens;
  ThetaSet theta;    // default theta
  LinearForm psi;    // default form
  std::string note;
};

std::vector<std::string> builtin_fixture_names();
Fixture builtin_fixture(const std::string& name);
// Builtin name or path to a fixture file.
Fixture load_fixture(const std::string& name_or_path);
Fixture parse_fixture_text(const std::string& text, const std::string& name = "file");

// Translation length of the SL_2 Schottky generators.
inline constexpr double kSchottkyLength = 1.0;
GeneratorSet schottky2_generators(double ell = kSchottkyLength);

// Four closed arcs on RP^1 certifying the ping-pong dynamics of a two-generator SL_2 group.
struct PingPongCertificate {
  bool ok = false;
  double worst_margin = 0;  // radians; positive when every image lands strictly inside
};
PingPongCertificate verify_pingpong_sl2(const GeneratorSet& gens, double half_width);

}  // namespace pslab
