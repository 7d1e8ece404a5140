#pragma once

// Induced contents, content/capacity equivalence, the packing condition
// and doubling constants of a set function.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dyadic/choquet.hpp"
#include "dyadic/grid.hpp"
#include "dyadic/lattice.hpp"
#include "dyadic/set_functions.hpp"

namespace dyadic {

// Content whose cube gauge is Q -> C(cells(Q)).
ContentHandle induced_content(const SetFunction& c);

struct EquivalenceSample {
  std::string label;
  std::int64_t cells = 0;
  double capacity = 0.0;
  double induced = 0.0;
  double ratio = 0.0;
};

struct EquivalenceReport {
  std::vector<EquivalenceSample> samples;
  double min_ratio = 1.0;
  double max_ratio = 1.0;
  std::int64_t skipped = 0;
  double tolerance = 1e-9;
  bool pass = true;
  // Sample with the smallest ratio, kept with its set.
  std::optional<EquivalenceSample> worst;
  std::optional<GridSet> worst_set;
};

// Deterministic adversarial sets: per-axis stride lattices, every cube,
// unions of two cubes. Labels describe each set.
std::vector<std::pair<std::string, GridSet>> adversarial_battery(const Lattice& lattice);

// Ratios C(E) / H^C(E) over the battery plus `samples` random sets; pass iff
// every ratio lies in [1/4 - tol, 1 + tol]. Both zero: skipped. One zero: fail.
EquivalenceReport equivalence_check(const SetFunction& c, int samples, std::uint64_t seed, double tolerance = 1e-9);

struct PackingConditionReport {
  double a0 = 2.0;
  std::int64_t families = 0;
  std::int64_t functions = 0;
  // Largest lhs / (a0 * rhs) observed.
  double worst_ratio = 0.0;
  bool pass = true;
  std::vector<CubeId> witness_family;
  std::string witness_function;
  double witness_lhs = 0.0;
  double witness_rhs = 0.0;
};

// Families: maximal partitions of the adversarial battery and `trials`
// random disjoint families, each thinned by packing_select against C's own
// cube values. Functions: the union's indicator and random step functions.
PackingConditionReport packing_condition_test(const SetFunction& c, int trials, std::uint64_t seed, double a0 = 2.0);

struct DoublingReport {
  double dyadic = 0.0;
  CubeId dyadic_parent;
  CubeId dyadic_child;
  double ball = 0.0;
  std::vector<double> ball_center;
  double ball_radius = 0.0;
  std::int64_t ball_pairs = 0;
  // True when radii were thinned to powers of two to bound the scan.
  bool geometric_radii = false;
};

DoublingReport doubling_constants(const SetFunction& c);

struct TheoremConstants {
  double A0 = 2.0;
  double M0 = 0.0;
  double D = 0.0;
  double D0 = 0.0;
  double Cprime = 2.0;
  double cprime = 0.0;
  double C_jn = 0.0;
  double c_jn = 0.0;
};

// A0 = C' = 2, c' = 2 + 2 M0, C = exp(1/(2C'e) + 1), c = 1/(2C'c'e).
TheoremConstants jn_constants(double m0);
TheoremConstants theorem_constants(const SetFunction& c);

}  // namespace dyadic
