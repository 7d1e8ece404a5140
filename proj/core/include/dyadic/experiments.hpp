#pragma once

// Experiments that restate the maximal, differentiation, John–Nirenberg
// and comparison inequalities with explicit constants and measure how
// close the library's values come to them.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dyadic/grid.hpp"
#include "dyadic/lattice.hpp"
#include "dyadic/set_functions.hpp"

namespace dyadic {

struct Measurement {
  std::string quantity;
  double value = 0.0;
  // Absent: reported only, no bound claimed.
  std::optional<double> bound;
  // "<=" (value at most bound) or ">=" (value at least bound).
  std::string relation = "<=";
  bool pass = true;
  std::map<std::string, std::string> context;
};

struct TailRow {
  std::string cube;
  double t = 0.0;
  double tail = 0.0;
  double bound = 0.0;
};

struct ExperimentReport {
  std::string name;
  std::string inputs_digest;
  std::map<std::string, double> constants;
  std::vector<Measurement> measurements;
  std::vector<TailRow> tails;
  bool pass = true;
  double runtime_ms = 0.0;

  // Appends and folds the verdict.
  void add(Measurement m);
};

struct NamedFunction {
  std::string name;
  GridFunction f;
};

// Spike, constants, random cube-union indicators, random step functions,
// random functions and (for n = 1) the leading-zero-bits function.
std::vector<NamedFunction> function_battery(const Lattice& lattice, std::uint64_t seed, int random_count = 20);

// 4 on the first cell, 0 elsewhere.
GridFunction spike_function(const Lattice& lattice);

// f(cell) = number of leading zero bits of the first cell index, written
// with depth bits; cell 0 gets the depth.
GridFunction leading_zero_bits_function(const Lattice& lattice);

// t * H({M^d f > t}) / integral of |f|.
double weak_type_ratio(const GridFunction& f, const SetFunction& h, double t);

// Max over f and t of t H({M^d |f| > t}) / integral |f|; bound 2. The ball
// operator's constant is reported without a bound when with_ball is set.
ExperimentReport weak_type_experiment(const std::vector<NamedFunction>& functions, const SetFunction& h,
                                      bool with_ball = false);

// integral (M^d f)^p / integral |f|^p against the cap 4 * 2^p * p/(p-1) * 2.
ExperimentReport strong_type_experiment(const std::vector<NamedFunction>& functions, const SetFunction& h, double p);

// Samples f at cell centers for every finest level and records the max over
// cells of the average of |f - f(x)| on the parent of x's cell.
ExperimentReport differentiation_experiment(const std::function<double(const std::vector<double>&)>& f, double lipschitz,
                                            int dimension, const std::vector<int>& levels,
                                            const std::function<SetFunction(const Lattice&)>& make_h,
                                            const std::string& label);

// Tail bound H({x in Q' : |f - c_Q'| > t}) <= C H(Q') exp(-c t / ||f||_BMO)
// over every cube up to four levels below q0 plus random deeper cubes.
ExperimentReport jn_experiment(const GridFunction& f, const SetFunction& h, const CubeId& q0, int random_cubes = 100,
                               std::uint64_t seed = 1);

// Uncentered ball vs dyadic maximal level sets with c = C'/2^n, C = 3^n.
ExperimentReport maximal_comparison(const std::vector<NamedFunction>& functions, const SetFunction& h);

// FNV-1a over the bytes, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);
std::string digest_of(const GridFunction& f);

}  // namespace dyadic
