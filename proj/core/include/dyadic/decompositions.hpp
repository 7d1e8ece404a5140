#pragma once

// Greedy packing selection, Calderón–Zygmund stopping cubes and maximal
// dyadic partitions of grid sets.

#include <cstdint>
#include <string>
#include <vector>

#include "dyadic/grid.hpp"
#include "dyadic/lattice.hpp"
#include "dyadic/set_functions.hpp"

namespace dyadic {

struct PackingProvenance {
  CubeId dropped;
  // Smallest ancestor that would have exceeded the packing bound.
  CubeId witness;
  // The kept ancestor containing the witness.
  CubeId absorbed_by;
};

struct PackingSelection {
  double constant = 2.0;
  std::vector<CubeId> selected;
  // Maximal, hence pairwise disjoint, witness ancestors.
  std::vector<CubeId> ancestors;
  // Witnesses discarded because a larger witness contains them.
  std::vector<CubeId> pruned;
  std::vector<PackingProvenance> provenance;
};

// Scans the family by (level descending, index ascending) and admits a cube
// iff every ancestor A keeps sum of selected lambda inside A <= constant * lambda(A).
// Throws std::invalid_argument when two family cubes overlap.
PackingSelection packing_select(std::vector<CubeId> family, const CubeGauge& lambda, double constant = 2.0);

struct PackingCheck {
  // Family union covered by selected and ancestors.
  bool covers = true;
  // Sum bound over every window cube.
  bool sums_bounded = true;
  // lambda(ancestor) <= sum of selected lambda inside it.
  bool ancestors_paid = true;
  bool ancestors_disjoint = true;
  std::int64_t cubes_checked = 0;
  std::string detail;

  bool pass() const { return covers && sums_bounded && ancestors_paid && ancestors_disjoint; }
};

PackingCheck verify_packing(const PackingSelection& selection, const std::vector<CubeId>& family, const CubeGauge& lambda);

struct PackingIntegralReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double a0 = 2.0;
  bool pass = true;
};

// sum_j integral over Q_j of f  vs  a0 * integral over the union of the Q_j.
PackingIntegralReport packing_integral_check(const std::vector<CubeId>& cubes, const GridFunction& f, const SetFunction& h,
                                             double a0 = 2.0);
PackingIntegralReport packing_integral_check(const PackingSelection& selection, const GridFunction& f,
                                             const SetFunction& h, double a0 = 2.0);

struct DoublingResult {
  // max H(parent) / H(child) over lattice edges, 0/0 skipped.
  double value = 0.0;
  CubeId parent;
  CubeId child;
  std::int64_t pairs = 0;
  std::int64_t skipped = 0;
};

DoublingResult dyadic_doubling(const SetFunction& h);

struct CZDecomposition {
  CubeId root;
  double height = 0.0;
  double root_average = 0.0;
  double upper_factor = 0.0;
  std::vector<CubeId> cubes;
  std::vector<double> averages;
  std::vector<double> parent_averages;
  // Linear cells of root minus the cubes where |f| > height.
  std::vector<std::int64_t> residual_violations;
  double residual_content = 0.0;
};

// Stopping cubes of |f| inside q at the given height, top-down.
CZDecomposition cz_decompose(const GridFunction& f, const CubeId& q, double height, const SetFunction& h);

// height < avg <= M0 * height on each cube, parent averages <= height and a
// null residual. Relative tolerance on the upper bound only.
bool cz_certificate_holds(const CZDecomposition& cz, std::string* reason = nullptr);

// Maximal dyadic cubes contained in u, in Morton order; their union is u.
std::vector<CubeId> maximal_dyadic_partition(const GridSet& u);

}  // namespace dyadic
