#pragma once

// Capacitary maximal operators: dyadic, centered and uncentered ball,
// and sharp, plus the BMO norm built on the sharp operator.

#include <variant>
#include <vector>

#include "dyadic/grid.hpp"
#include "dyadic/lattice.hpp"
#include "dyadic/set_functions.hpp"

namespace dyadic {

using MaximalWitness = std::variant<std::monostate, CubeId, Ball>;

struct MaximalResult {
  GridFunction values;
  // Indexed by linear cell; the cube or ball attaining the value.
  std::vector<MaximalWitness> witness;
};

// Sup over the ancestors Q of each cell of the capacitary average of f on Q.
MaximalResult dyadic_maximal(const GridFunction& f, const SetFunction& h);

// Radii j * cell side for j = 1 .. ceil(sqrt(n) / cell side).
std::vector<double> ball_radii(const Lattice& lattice);

// Integral of f over the cells of the ball divided by H of those cells.
double ball_average(const GridFunction& f, const SetFunction& h, const Ball& ball);

// Centered: balls around the cell's own center. Uncentered: every ball of
// the discrete family (cell centers, ball_radii) that contains the cell.
MaximalResult ball_maximal(const GridFunction& f, const SetFunction& h, bool centered);

struct BestConstant {
  double c = 0.0;
  double deviation = 0.0;
};

// (1 / H(Q)) * integral over Q of |f - c|; 0 when H(Q) = 0.
double mean_deviation(const GridFunction& f, const CubeId& cube, const SetFunction& h, double c);

// Smallest minimizing c. The objective is piecewise linear with breakpoints
// among the values of f on Q and their pairwise midpoints.
BestConstant best_constant(const GridFunction& f, const CubeId& cube, const SetFunction& h);

// Cells outside q0 get 0 and no witness.
MaximalResult sharp_maximal(const GridFunction& f, const SetFunction& h, const CubeId& q0);

double bmo_norm(const GridFunction& f, const SetFunction& h, const CubeId& q0);

}  // namespace dyadic
