#include "dyadic/set_functions.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dyadic/extended.hpp"
#include "dyadic/random.hpp"

namespace dyadic {
namespace {

std::string format_real(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

void require_positive_beta(double beta, const char* kind) {
  require_not_nan(beta, kind);
  if (!(beta > 0.0) || is_infinite(beta)) {
    throw std::invalid_argument(std::string(kind) + " gauge needs a finite beta > 0, got " + format_real(beta));
  }
}

void require_cube_value(double v, const CubeId& cube) {
  require_not_nan(v, "cube gauge");
  if (v < 0.0) throw std::invalid_argument("cube gauge value at " + to_string(cube) + " is negative");
}

// Sums of density * |cell| over set ∩ Q for every cube Q, or over every
// cell when set is null.
CubeField mass_field(const GridFunction& density, const GridSet* set) {
  const Lattice& lat = density.lattice();
  CubeField field(lat, 0.0);
  const double cell_volume = std::ldexp(1.0, lat.dimension() * lat.finest_level());
  const int D = lat.depth();
  for (std::int64_t m = 0; m < lat.cell_count(); ++m) {
    if (set == nullptr || set->test_morton(m)) field.set(D, m, density.at_morton(m) * cell_volume);
  }
  const int k = lat.children_per_cube();
  for (int d = D - 1; d >= 0; --d) {
    for (std::int64_t p = 0; p < lat.cubes_at_depth(d); ++p) {
      double s = 0.0;
      for (int c = 0; c < k; ++c) s += field.at(d + 1, p * k + c);
      field.set(d, p, s);
    }
  }
  return field;
}

void check_density(const GridFunction& density, double alpha) {
  const int n = density.lattice().dimension();
  require_not_nan(alpha, "measure power");
  if (!(alpha > 0.0) || alpha > n) {
    throw std::invalid_argument("measure power needs 0 < alpha <= n, got alpha = " + format_real(alpha));
  }
  for (double v : density.morton_values()) {
    if (v < 0.0 || is_infinite(v)) throw std::invalid_argument("measure density must be finite and nonnegative");
  }
}

std::string measure_power_name(double alpha, bool uniform) {
  return "measure_power(alpha=" + format_real(alpha) + (uniform ? ", uniform)" : ")");
}

class CallableImpl final : public detail::SetFunctionImpl {
 public:
  CallableImpl(Lattice lattice, std::function<double(const GridSet&)> fn)
      : SetFunctionImpl(std::move(lattice)), fn_(std::move(fn)) {
    init_cube_values();
  }

  double evaluate(const GridSet& set) const override {
    const double v = fn_(set);
    require_not_nan(v, "set function");
    return v;
  }

 private:
  std::function<double(const GridSet&)> fn_;
};

class TableImpl final : public detail::SetFunctionImpl {
 public:
  TableImpl(Lattice lattice, std::vector<double> values) : SetFunctionImpl(std::move(lattice)), values_(std::move(values)) {
    if (lattice_.cell_count() > 20) throw std::invalid_argument("table set functions support at most 20 cells");
    if (values_.size() != (std::size_t{1} << lattice_.cell_count())) {
      throw std::invalid_argument("table set function needs 2^" + std::to_string(lattice_.cell_count()) + " values");
    }
    for (double v : values_) require_nonnegative(v, "table set function");
    init_cube_values();
  }

  double evaluate(const GridSet& set) const override {
    std::size_t mask = 0;
    for (std::int64_t c : set.cells()) mask |= std::size_t{1} << c;
    return values_[mask];
  }

 private:
  std::vector<double> values_;
};

class MeasurePowerImpl final : public detail::SetFunctionImpl {
 public:
  MeasurePowerImpl(GridFunction density, double alpha)
      : SetFunctionImpl(density.lattice()), density_(std::move(density)), alpha_(alpha) {
    check_density(density_, alpha_);
    init_cube_values();
  }

  double evaluate(const GridSet& set) const override { return measure_power_eval(set, alpha_, density_); }

  CubeField restricted(const GridSet& set) const override {
    CubeField field = mass_field(density_, &set);
    const double theta = alpha_ / lattice_.dimension();
    for (int d = 0; d <= lattice_.depth(); ++d) {
      for (std::int64_t p = 0; p < lattice_.cubes_at_depth(d); ++p) field.set(d, p, std::pow(field.at(d, p), theta));
    }
    return field;
  }

 private:
  GridFunction density_;
  double alpha_;
};

}  // namespace

Gauge Gauge::power(double beta) {
  require_positive_beta(beta, "power");
  return Gauge(Kind::kPower, beta, {});
}

Gauge Gauge::log(double beta) {
  require_positive_beta(beta, "log");
  return Gauge(Kind::kLog, beta, {});
}

Gauge Gauge::table(std::map<int, double> value_by_level) {
  if (value_by_level.empty()) throw std::invalid_argument("table gauge is empty");
  for (const auto& [level, v] : value_by_level) require_nonnegative(v, "table gauge");
  return Gauge(Kind::kTable, 0.0, std::move(value_by_level));
}

std::string Gauge::name() const {
  switch (kind_) {
    case Kind::kPower:
      return "power(beta=" + format_real(beta_) + ")";
    case Kind::kLog:
      return "log(beta=" + format_real(beta_) + ", natural log)";
    case Kind::kTable:
      return "table";
  }
  return "gauge";
}

double Gauge::operator()(double side) const {
  require_not_nan(side, "gauge side");
  if (!(side > 0.0)) throw std::invalid_argument("gauge side must be positive");
  switch (kind_) {
    case Kind::kPower:
      return is_infinite(side) ? kInfinity : std::pow(side, beta_);
    case Kind::kLog:
      if (side >= 2.0) return kInfinity;
      return std::pow(std::log(2.0 / side), -beta_);
    case Kind::kTable: {
      int exp = 0;
      const double mant = std::frexp(side, &exp);
      if (mant != 0.5) throw std::invalid_argument("table gauge is only defined at dyadic sides");
      const auto it = table_.find(exp - 1);
      if (it == table_.end()) {
        throw std::invalid_argument("table gauge has no value for level " + std::to_string(exp - 1));
      }
      return it->second;
    }
  }
  return 0.0;
}

void Gauge::validate_on(const Lattice& lattice) const {
  if (kind_ != Kind::kTable) return;
  double previous = 0.0;
  for (int level = lattice.finest_level(); level <= 0; ++level) {
    const auto it = table_.find(level);
    if (it == table_.end()) {
      throw std::invalid_argument("table gauge is missing level " + std::to_string(level));
    }
    if (it->second < previous) {
      throw std::invalid_argument("table gauge decreases at level " + std::to_string(level));
    }
    previous = it->second;
  }
}

CubeGauge::CubeGauge(Lattice lattice, CubeField values, std::string name)
    : lattice_(std::move(lattice)), values_(std::move(values)), name_(std::move(name)) {}

CubeGauge CubeGauge::from_gauge(const Lattice& lattice, const Gauge& gauge) {
  gauge.validate_on(lattice);
  std::vector<double> per_depth;
  for (int d = 0; d <= lattice.depth(); ++d) per_depth.push_back(gauge(std::ldexp(1.0, -d)));
  return CubeGauge(lattice, CubeField::uniform_per_depth(lattice, std::move(per_depth)), gauge.name());
}

CubeGauge CubeGauge::measure_power(const GridFunction& density, double alpha) {
  check_density(density, alpha);
  const Lattice& lat = density.lattice();
  CubeField field = mass_field(density, nullptr);
  const double theta = alpha / lat.dimension();
  for (int d = 0; d <= lat.depth(); ++d) {
    for (std::int64_t p = 0; p < lat.cubes_at_depth(d); ++p) field.set(d, p, std::pow(field.at(d, p), theta));
  }
  return CubeGauge(lat, std::move(field), measure_power_name(alpha, false));
}

CubeGauge CubeGauge::uniform_measure_power(const Lattice& lattice, double alpha) {
  check_density(GridFunction(lattice, 1.0), alpha);
  std::vector<double> per_depth;
  for (int d = 0; d <= lattice.depth(); ++d) per_depth.push_back(std::pow(std::ldexp(1.0, -lattice.dimension() * d), alpha / lattice.dimension()));
  return CubeGauge(lattice, CubeField::uniform_per_depth(lattice, std::move(per_depth)), measure_power_name(alpha, true));
}

CubeGauge CubeGauge::table(const Lattice& lattice, std::span<const std::pair<CubeId, double>> entries) {
  CubeField field(lattice, 0.0);
  std::set<std::pair<int, std::int64_t>> seen;
  for (const auto& [cube, v] : entries) {
    lattice.validate(cube);
    require_cube_value(v, cube);
    const int d = -cube.level;
    const std::int64_t p = lattice.prefix(cube);
    if (!seen.insert({d, p}).second) throw std::invalid_argument("table lists cube " + to_string(cube) + " twice");
    field.set(d, p, v);
  }
  if (static_cast<std::int64_t>(seen.size()) != lattice.cube_count()) {
    throw std::invalid_argument("table covers " + std::to_string(seen.size()) + " of " +
                                std::to_string(lattice.cube_count()) + " window cubes; partial tables are rejected");
  }
  return from_field(lattice, std::move(field), "table");
}

CubeGauge CubeGauge::from_field(const Lattice& lattice, CubeField values, std::string name) {
  if (values.depth() != lattice.depth()) throw std::invalid_argument("cube field does not match the lattice");
  for (int d = 0; d <= lattice.depth(); ++d) {
    for (std::int64_t p = 0; p < (values.is_uniform(d) ? 1 : lattice.cubes_at_depth(d)); ++p) {
      require_cube_value(values.at(d, p), lattice.cube_at(d, p));
    }
  }
  CubeGauge g(lattice, std::move(values), std::move(name));
  if (auto bad = g.monotonicity_violation()) {
    throw std::invalid_argument("cube gauge is not monotone: lambda" + to_string(bad->first) + " > lambda" +
                                to_string(bad->second));
  }
  return g;
}

double CubeGauge::operator()(const CubeId& cube) const { return values_.at(-cube.level, lattice_.prefix(cube)); }

bool CubeGauge::translation_invariant() const {
  for (int d = 0; d <= values_.depth(); ++d) {
    if (values_.is_uniform(d)) continue;
    const auto row = values_.row(d);
    if (std::any_of(row.begin(), row.end(), [&](double v) { return v != row.front(); })) return false;
  }
  return true;
}

std::optional<std::pair<CubeId, CubeId>> CubeGauge::monotonicity_violation() const {
  const int shift = lattice_.dimension();
  for (int d = 1; d <= lattice_.depth(); ++d) {
    if (values_.is_uniform(d) && values_.is_uniform(d - 1)) {
      if (values_.at(d, 0) > values_.at(d - 1, 0)) return std::pair{lattice_.cube_at(d, 0), lattice_.cube_at(d - 1, 0)};
      continue;
    }
    for (std::int64_t p = 0; p < lattice_.cubes_at_depth(d); ++p) {
      if (values_.at(d, p) > values_.at(d - 1, p >> shift)) {
        return std::pair{lattice_.cube_at(d, p), lattice_.cube_at(d - 1, p >> shift)};
      }
    }
  }
  return std::nullopt;
}

namespace detail {

double SetFunctionImpl::evaluate_within(const GridSet& set, int, std::int64_t) const { return evaluate(set); }

CubeField SetFunctionImpl::restricted(const GridSet& set) const {
  CubeField field(lattice_, 0.0);
  for (int d = 0; d <= lattice_.depth(); ++d) {
    const std::int64_t span = lattice_.cells_below(d);
    for (std::int64_t p = 0; p < lattice_.cubes_at_depth(d); ++p) {
      if (!set.any_in_morton_range(p * span, (p + 1) * span)) continue;
      GridSet part(lattice_);
      for (std::int64_t m = p * span; m < (p + 1) * span; ++m) {
        if (set.test_morton(m)) part.set_morton(m, true);
      }
      field.set(d, p, evaluate_within(part, d, p));
    }
  }
  return field;
}

}  // namespace detail

SetFunction::SetFunction(std::shared_ptr<const detail::SetFunctionImpl> impl, SetFunctionInfo info)
    : impl_(std::move(impl)), info_(std::move(info)) {
  if (!impl_) throw std::invalid_argument("set function without an evaluator");
}

SetFunction SetFunction::from_callable(Lattice lattice, std::function<double(const GridSet&)> fn, SetFunctionInfo info) {
  if (!fn) throw std::invalid_argument("set function without an evaluator");
  return SetFunction(std::make_shared<CallableImpl>(std::move(lattice), std::move(fn)), std::move(info));
}

SetFunction SetFunction::from_table(Lattice lattice, std::vector<double> value_by_mask, SetFunctionInfo info) {
  return SetFunction(std::make_shared<TableImpl>(std::move(lattice), std::move(value_by_mask)), std::move(info));
}

void SetFunction::require_lattice(const GridSet& set) const {
  if (!(set.lattice() == lattice())) throw std::invalid_argument("set lives on a different lattice than " + name());
}

double SetFunction::operator()(const GridSet& set) const {
  require_lattice(set);
  return impl_->evaluate(set);
}

double SetFunction::within(const GridSet& set, const CubeId& cube) const {
  require_lattice(set);
  const int d = -cube.level;
  const std::int64_t p = lattice().prefix(cube);
  if (set.empty()) return impl_->evaluate(set);
  const std::int64_t span = lattice().cells_below(d);
  if (set.first_morton() < p * span || set.last_morton() >= (p + 1) * span) {
    throw std::invalid_argument("set is not contained in cube " + to_string(cube));
  }
  return impl_->evaluate_within(set, d, p);
}

CubeField SetFunction::restricted(const GridSet& set) const {
  require_lattice(set);
  return impl_->restricted(set);
}

double SetFunction::cube_value(const CubeId& cube) const { return cube_values().at(-cube.level, lattice().prefix(cube)); }

double measure_power_eval(const GridSet& set, double alpha, const GridFunction& density) {
  if (!(set.lattice() == density.lattice())) throw std::invalid_argument("set and density live on different lattices");
  const Lattice& lat = density.lattice();
  const int n = lat.dimension();
  require_not_nan(alpha, "measure power");
  if (!(alpha > 0.0) || alpha > n) {
    throw std::invalid_argument("measure power needs 0 < alpha <= n, got alpha = " + format_real(alpha));
  }
  const double cell_volume = std::ldexp(1.0, n * lat.finest_level());
  // Same reduction order as mass_field, so cube values agree bit for bit.
  std::vector<double> mass(static_cast<std::size_t>(lat.cell_count()), 0.0);
  for (std::int64_t m = 0; m < lat.cell_count(); ++m) {
    if (set.test_morton(m)) mass[static_cast<std::size_t>(m)] = density.at_morton(m) * cell_volume;
  }
  const std::size_t k = static_cast<std::size_t>(lat.children_per_cube());
  for (std::size_t size = mass.size(); size > 1; size /= k) {
    for (std::size_t p = 0; p < size / k; ++p) {
      double s = 0.0;
      for (std::size_t c = 0; c < k; ++c) s += mass[p * k + c];
      mass[p] = s;
    }
  }
  return std::pow(mass[0], alpha / n);
}

SetFunction measure_power_capacity(const GridFunction& density, double alpha) {
  SetFunctionInfo info{measure_power_name(alpha, false), true, false, true, ""};
  info.notes = "mu(E)^(alpha/n) evaluated on grid sets";
  return SetFunction(std::make_shared<MeasurePowerImpl>(density, alpha), std::move(info));
}

SetFunction uniform_measure_power_capacity(const Lattice& lattice, double alpha) {
  SetFunctionInfo info{measure_power_name(alpha, true), true, true, true, ""};
  info.notes = "Lebesgue measure to the power alpha/n";
  return SetFunction(std::make_shared<MeasurePowerImpl>(GridFunction(lattice, 1.0), alpha), std::move(info));
}

MonotonicityReport check_monotone(const SetFunction& handle, int trials, std::uint64_t seed) {
  const Lattice& lat = handle.lattice();
  MonotonicityReport report;
  const GridSet empty(lat);
  report.empty_value = handle(empty);
  if (report.empty_value != 0.0) {
    report.pass = false;
    report.violation = MonotonicityViolation{empty, empty, report.empty_value, report.empty_value};
    return report;
  }
  auto record = [&](const GridSet& a, const GridSet& b) {
    ++report.pairs_checked;
    const double va = handle(a);
    const double vb = handle(b);
    if (va > vb + 1e-12 * std::max(1.0, std::fabs(vb))) {
      report.pass = false;
      report.violation = MonotonicityViolation{a, b, va, vb};
      return false;
    }
    return true;
  };
  if (lat.cell_count() <= 12) {
    report.exhaustive = true;
    const std::int64_t cells = lat.cell_count();
    for (std::int64_t mask = 1; mask < (std::int64_t{1} << cells); ++mask) {
      GridSet b(lat);
      for (std::int64_t c = 0; c < cells; ++c) {
        if ((mask >> c) & 1) b.insert(c);
      }
      for (std::int64_t c = 0; c < cells; ++c) {
        if (!((mask >> c) & 1)) continue;
        GridSet a = b;
        a.erase(c);
        if (!record(a, b)) return report;
      }
    }
    return report;
  }
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(t));
    const double density = rng.uniform();
    const double keep = rng.uniform();
    GridSet b(lat);
    GridSet a(lat);
    for (std::int64_t m = 0; m < lat.cell_count(); ++m) {
      if (rng.bernoulli(density)) {
        b.set_morton(m, true);
        if (rng.bernoulli(keep)) a.set_morton(m, true);
      }
    }
    if (!record(a, b)) return report;
  }
  return report;
}

}  // namespace dyadic
