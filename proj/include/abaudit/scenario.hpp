#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "abaudit/conformal.hpp"
#include "abaudit/riemann.hpp"

namespace abaudit {

// Parsed form of a scenario file. Geometry entries stay as source strings
// here; they are parsed against the chart table once the chart exists.
//
// File grammar, line oriented ('#' starts a comment):
//   dim    = 2
//   metric = [[1, 0], [0, 1 + x1^2]]
//   b      = [x2, 1]
//   sigma  = x1 * x2
//   eps    = 1
//   k      = 1
//   seed   = 1729
//   points = [[1, 2], [1/2, -3]]
// Keys may come in any order; each may appear once. dim, metric and b are
// required, sigma defaults to 0, eps/k default to the linear pair (1, 0),
// seed defaults to 1729 and points may be empty.
struct Scenario {
  std::size_t dim = 0;
  std::vector<std::vector<std::string>> metric;
  std::vector<std::string> b;
  std::string sigma = "0";
  Rat eps = Rat(1);
  Rat k = Rat(0);
  std::uint64_t seed = 1729;
  std::vector<std::vector<Rat>> points;
};

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);

// The bundled scenario the auditor falls back to when none is given. The
// copy shipped under scenarios/ must stay byte-identical; a test guards
// that.
const std::string& default_scenario_text();

// A scenario brought to life: chart, geometry, scale package, unit atom,
// and the length form installed as the table root. Sample points are
// validated here (nonsingular metric, nonvanishing package denominator).
struct Model {
  Chart ch;
  MetricData g;
  ExprTen3 gamma;
  BetaData bd;
  ScaleData sd;
  SymId E = kNoSym;
  Expr unit;
  Expr alpha;
  Expr omega;  // package denominator on this chart, for point screening
  Rat eps, k;
  std::uint64_t seed = 1729;
  std::vector<std::map<SymId, Rat>> xpoints;
};

Model build_model(const Scenario& sc);

}  // namespace abaudit
