#pragma once

// Dyadic Hausdorff contents and Choquet integrals of step functions.
//
// content: cost(Q) = min(lambda(Q), sum of cost over the children of Q),
// with leaves costing lambda(cell) when the cell is a member and 0 otherwise.
// The value at a cube Q is the content of E ∩ Q, so one bottom-up pass
// yields the restricted content for every cube at once.

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "dyadic/grid.hpp"
#include "dyadic/lattice.hpp"
#include "dyadic/set_functions.hpp"

namespace dyadic {

struct ContentCover {
  double cost = 0.0;
  // Disjoint cubes attaining the cost; coarser cubes win ties.
  std::vector<CubeId> cubes;
};

class ContentHandle : public SetFunction {
 public:
  explicit ContentHandle(CubeGauge gauge);

  const CubeGauge& gauge() const { return *content_gauge(); }
  ContentCover cover(const GridSet& set) const;
};

ContentHandle make_content(const Lattice& lattice, const Gauge& gauge);

double content(const GridSet& set, const CubeGauge& lambda);
ContentCover content_cover(const GridSet& set, const CubeGauge& lambda);

// Layer cake over the distinct positive values of f on the region:
// sum_k (t_k - t_{k-1}) H({x in region : f(x) >= t_k}). A +inf value on a
// set of positive capacity makes the integral +inf. f must be nonnegative
// on the region.
double choquet_integral(const GridFunction& f, const SetFunction& h);
double choquet_integral(const GridFunction& f, const SetFunction& h, const GridSet& region);
double choquet_integral_on_cube(const GridFunction& f, const CubeId& cube, const SetFunction& h);

// Integral over the cube divided by H(cube), 0 when H(cube) = 0.
double average(const GridFunction& f, const CubeId& cube, const SetFunction& h);

// (integral of |f|^p)^(1/p), p >= 1.
double lp_norm(const GridFunction& f, const SetFunction& h, const GridSet& region, double p);
double lp_norm(const GridFunction& f, const SetFunction& h, double p);

// Integral, capacity and average of f on every window cube.
struct CubeAverages {
  CubeField integral;
  CubeField capacity;
  CubeField average;
};
CubeAverages cube_averages(const GridFunction& f, const SetFunction& h);

// Distinct values of f on the region, ascending.
std::vector<double> distinct_values(const GridFunction& f, const GridSet& region);
std::vector<double> distinct_values(const GridFunction& f);

namespace detail {

// Layer cake over (value, Morton cell) pairs; values must be nonnegative.
double layer_cake(const Lattice& lattice, std::vector<std::pair<double, std::int64_t>> entries,
                  const std::function<double(const GridSet&)>& measure);

}  // namespace detail

}  // namespace dyadic
