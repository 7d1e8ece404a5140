#pragma once

// Gauges, cube gauges and monotone set functions on grid sets.
//
// A Gauge maps a side length to a cost (power, logarithmic or tabulated).
// A CubeGauge assigns a cost to every window cube; the Hausdorff content
// built from it lives in choquet.hpp. A SetFunction is the evaluable
// handle E -> [0, inf] that every integral and maximal operator consumes.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dyadic/grid.hpp"
#include "dyadic/lattice.hpp"

namespace dyadic {

class Gauge {
 public:
  enum class Kind { kPower, kLog, kTable };

  // t -> t^beta.
  static Gauge power(double beta);
  // t -> [ln(2/t)]^(-beta) for t < 2 and +inf for t >= 2. Natural log.
  static Gauge log(double beta);
  // Tabulated by level: side 2^k -> value.
  static Gauge table(std::map<int, double> value_by_level);

  Kind kind() const { return kind_; }
  double beta() const { return beta_; }
  const std::map<int, double>& table_values() const { return table_; }
  std::string name() const;

  double operator()(double side) const;

  // Table gauges must cover every level of the lattice; every kind must be
  // monotone over the admissible sides. Throws std::invalid_argument.
  void validate_on(const Lattice& lattice) const;

 private:
  Gauge(Kind kind, double beta, std::map<int, double> table) : kind_(kind), beta_(beta), table_(std::move(table)) {}

  Kind kind_;
  double beta_;
  std::map<int, double> table_;
};

inline double eval_gauge(const Gauge& gauge, double side) { return gauge(side); }

// Cost of every window cube. Monotone under inclusion by construction.
class CubeGauge {
 public:
  // lambda(Q) = phi(side(Q)).
  static CubeGauge from_gauge(const Lattice& lattice, const Gauge& gauge);
  // lambda(Q) = mu(Q)^(alpha/n) with mu(cell) = density(cell) * |cell|.
  static CubeGauge measure_power(const GridFunction& density, double alpha);
  static CubeGauge uniform_measure_power(const Lattice& lattice, double alpha);
  // Every window cube must appear exactly once.
  static CubeGauge table(const Lattice& lattice, std::span<const std::pair<CubeId, double>> entries);
  static CubeGauge from_field(const Lattice& lattice, CubeField values, std::string name);

  const Lattice& lattice() const { return lattice_; }
  const std::string& name() const { return name_; }
  const CubeField& values() const { return values_; }
  double at(int depth, std::int64_t prefix) const { return values_.at(depth, prefix); }
  double operator()(const CubeId& cube) const;
  bool translation_invariant() const;

  // First (child, parent) pair with lambda(child) > lambda(parent).
  std::optional<std::pair<CubeId, CubeId>> monotonicity_violation() const;

 private:
  CubeGauge(Lattice lattice, CubeField values, std::string name);

  Lattice lattice_;
  CubeField values_;
  std::string name_;
};

struct SetFunctionInfo {
  std::string name;
  bool subadditive_claimed = false;
  bool doubling_claimed = false;
  // Strong subadditivity; makes the best-constant objective convex.
  bool submodular_claimed = false;
  std::string notes;
};

namespace detail {

class SetFunctionImpl {
 public:
  explicit SetFunctionImpl(Lattice lattice) : lattice_(std::move(lattice)) {}
  virtual ~SetFunctionImpl() = default;

  const Lattice& lattice() const { return lattice_; }

  virtual double evaluate(const GridSet& set) const = 0;
  // H(set) for a set contained in the cube (depth, prefix).
  virtual double evaluate_within(const GridSet& set, int depth, std::int64_t prefix) const;
  // H(set ∩ Q) for every window cube Q.
  virtual CubeField restricted(const GridSet& set) const;
  virtual const CubeGauge* content_gauge() const { return nullptr; }

  const CubeField& cube_values() const { return cube_values_; }

 protected:
  // Subclasses call this once their state is ready.
  void init_cube_values() { cube_values_ = restricted(GridSet::full(lattice_)); }

  Lattice lattice_;
  CubeField cube_values_;
};

}  // namespace detail

class SetFunction {
 public:
  SetFunction(std::shared_ptr<const detail::SetFunctionImpl> impl, SetFunctionInfo info);

  static SetFunction from_callable(Lattice lattice, std::function<double(const GridSet&)> fn, SetFunctionInfo info);
  // Values indexed by the bitmask of member linear cells; needs at most 20 cells.
  static SetFunction from_table(Lattice lattice, std::vector<double> value_by_mask, SetFunctionInfo info);

  double operator()(const GridSet& set) const;
  // H(set) when set ⊆ cube; may use only the cube's subtree.
  double within(const GridSet& set, const CubeId& cube) const;
  CubeField restricted(const GridSet& set) const;
  const CubeField& cube_values() const { return impl_->cube_values(); }
  double cube_value(const CubeId& cube) const;

  const Lattice& lattice() const { return impl_->lattice(); }
  const SetFunctionInfo& info() const { return info_; }
  const std::string& name() const { return info_.name; }
  // Non-null for Hausdorff contents built from a cube gauge.
  const CubeGauge* content_gauge() const { return impl_->content_gauge(); }
  const detail::SetFunctionImpl& impl() const { return *impl_; }

 private:
  void require_lattice(const GridSet& set) const;

  std::shared_ptr<const detail::SetFunctionImpl> impl_;
  SetFunctionInfo info_;
};

// (sum of mu over cells of E)^(alpha/n).
double measure_power_eval(const GridSet& set, double alpha, const GridFunction& density);

// C(E) = mu(E)^(alpha/n); every grid set is open in the discretization, so
// the outer infimum is attained by E itself.
SetFunction measure_power_capacity(const GridFunction& density, double alpha);
SetFunction uniform_measure_power_capacity(const Lattice& lattice, double alpha);

struct MonotonicityViolation {
  GridSet smaller;
  GridSet larger;
  double smaller_value = 0.0;
  double larger_value = 0.0;
};

struct MonotonicityReport {
  bool pass = true;
  double empty_value = 0.0;
  std::int64_t pairs_checked = 0;
  bool exhaustive = false;
  std::optional<MonotonicityViolation> violation;
};

// Exhaustive over single-cell removals when the window has at most 12 cells,
// randomized A ⊆ B pairs otherwise. Also requires eval(empty) == 0.
MonotonicityReport check_monotone(const SetFunction& handle, int trials, std::uint64_t seed = 1);

}  // namespace dyadic
