#include "dyadic/equivalence.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dyadic/decompositions.hpp"
#include "dyadic/extended.hpp"
#include "dyadic/maximal.hpp"
#include "dyadic/sampling.hpp"

namespace dyadic {
namespace {

constexpr std::int64_t kMaxBatteryCubes = std::int64_t{1} << 16;
constexpr std::int64_t kMaxBallPairs = 65536;

std::string cube_label(const CubeId& c) { return "cube " + to_string(c); }

double sample_ratio(double capacity, double induced) {
  if (induced == 0.0) return capacity == 0.0 ? 1.0 : kInfinity;
  if (is_infinite(induced)) return is_infinite(capacity) ? 1.0 : 0.0;
  return capacity / induced;
}

}  // namespace

ContentHandle induced_content(const SetFunction& c) {
  return ContentHandle(CubeGauge::from_field(c.lattice(), c.cube_values(), "induced[" + c.name() + "]"));
}

std::vector<std::pair<std::string, GridSet>> adversarial_battery(const Lattice& lattice) {
  std::vector<std::pair<std::string, GridSet>> out;
  const int D = lattice.depth();
  for (int j = 1; j <= D; ++j) {
    GridSet s(lattice);
    const std::int64_t stride = std::int64_t{1} << j;
    for (std::int64_t c = 0; c < lattice.cell_count(); ++c) {
      const auto idx = lattice.cell_index(c);
      bool keep = true;
      for (auto i : idx) keep = keep && i % stride == 0;
      if (keep) s.insert(c);
    }
    out.emplace_back("stride 2^" + std::to_string(j) + " lattice", std::move(s));
  }
  if (lattice.cube_count() <= kMaxBatteryCubes) {
    for (const auto& c : lattice.all_cubes()) out.emplace_back(cube_label(c), lattice.cells(c));
  } else {
    for (int d = 0; d <= D; ++d) {
      for (std::int64_t p : {std::int64_t{0}, lattice.cubes_at_depth(d) / 2, lattice.cubes_at_depth(d) - 1}) {
        out.emplace_back(cube_label(lattice.cube_at(d, p)), lattice.cells(lattice.cube_at(d, p)));
      }
    }
  }
  for (int d = 1; d <= D; ++d) {
    const std::int64_t last = lattice.cubes_at_depth(d) - 1;
    for (std::int64_t p : {std::int64_t{1}, lattice.cubes_at_depth(d) / 2, last}) {
      if (p == 0) continue;
      const CubeId a = lattice.cube_at(d, 0);
      const CubeId b = lattice.cube_at(d, p);
      out.emplace_back("union " + to_string(a) + " + " + to_string(b), lattice.cells(a) | lattice.cells(b));
    }
    for (int e = d + 1; e <= D; ++e) {
      const CubeId a = lattice.cube_at(d, 0);
      const CubeId b = lattice.cube_at(e, lattice.cubes_at_depth(e) - 1);
      out.emplace_back("union " + to_string(a) + " + " + to_string(b), lattice.cells(a) | lattice.cells(b));
    }
  }
  return out;
}

EquivalenceReport equivalence_check(const SetFunction& c, int samples, std::uint64_t seed, double tolerance) {
  const Lattice& lat = c.lattice();
  const ContentHandle h = induced_content(c);
  EquivalenceReport report;
  report.tolerance = tolerance;
  bool first = true;
  auto add = [&](std::string label, const GridSet& set) {
    EquivalenceSample s;
    s.label = std::move(label);
    s.cells = set.count();
    s.capacity = c(set);
    s.induced = h(set);
    if (s.capacity == 0.0 && s.induced == 0.0) {
      ++report.skipped;
      return;
    }
    s.ratio = sample_ratio(s.capacity, s.induced);
    if (first || s.ratio < report.min_ratio) {
      report.worst = s;
      report.worst_set = set;
    }
    report.min_ratio = first ? s.ratio : std::min(report.min_ratio, s.ratio);
    report.max_ratio = first ? s.ratio : std::max(report.max_ratio, s.ratio);
    first = false;
    if (s.ratio < 0.25 - tolerance || s.ratio > 1.0 + tolerance) report.pass = false;
    report.samples.push_back(std::move(s));
  };
  for (auto& [label, set] : adversarial_battery(lat)) add(std::move(label), set);
  for (int i = 0; i < samples; ++i) {
    Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(i));
    add("random set " + std::to_string(i), random_set(lat, rng));
  }
  return report;
}

PackingConditionReport packing_condition_test(const SetFunction& c, int trials, std::uint64_t seed, double a0) {
  require_not_nan(a0, "A0");
  if (!(a0 >= 1.0)) throw std::invalid_argument("A0 must be at least 1");
  const Lattice& lat = c.lattice();
  const CubeGauge lambda = CubeGauge::from_field(lat, c.cube_values(), c.name());
  PackingConditionReport report;
  report.a0 = a0;
  auto test_family = [&](const std::vector<CubeId>& family, Rng& rng) {
    if (family.empty()) return;
    const PackingSelection sel = packing_select(family, lambda, a0);
    if (sel.selected.empty()) return;
    ++report.families;
    GridSet all(lat);
    for (const auto& q : sel.selected) all |= lat.cells(q);
    std::vector<std::pair<std::string, GridFunction>> functions;
    functions.emplace_back("indicator of the union", GridFunction::indicator(all));
    for (int k = 0; k < 3; ++k) functions.emplace_back("random step function", random_step_function(lat, rng));
    functions.emplace_back("random function", random_function(lat, rng));
    for (const auto& [what, f] : functions) {
      ++report.functions;
      const PackingIntegralReport r = packing_integral_check(sel.selected, f, c, a0);
      const double ratio = r.rhs == 0.0 && r.lhs > 0.0 ? kInfinity : convention_ratio(r.lhs, a0 * r.rhs);
      const bool first_failure = !r.pass && report.pass;
      const bool new_worst = ratio > report.worst_ratio && (!r.pass || report.pass);
      if (first_failure || new_worst || report.witness_family.empty()) {
        report.witness_family = sel.selected;
        report.witness_function = what;
        report.witness_lhs = r.lhs;
        report.witness_rhs = r.rhs;
      }
      report.worst_ratio = std::max(report.worst_ratio, ratio);
      if (!r.pass) report.pass = false;
    }
  };
  Rng battery_rng = Rng::for_trial(seed, ~std::uint64_t{0});
  for (const auto& [label, set] : adversarial_battery(lat)) test_family(maximal_dyadic_partition(set), battery_rng);
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(t));
    const int attempts = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(4 * lat.cell_count())));
    test_family(random_family(lat, rng, std::min(attempts, 256)), rng);
  }
  return report;
}

DoublingReport doubling_constants(const SetFunction& c) {
  const Lattice& lat = c.lattice();
  DoublingReport out;
  const DoublingResult dy = dyadic_doubling(c);
  out.dyadic = dy.value;
  out.dyadic_parent = dy.parent;
  out.dyadic_child = dy.child;

  std::vector<double> radii = ball_radii(lat);
  if (lat.cell_count() * static_cast<std::int64_t>(radii.size()) > kMaxBallPairs) {
    out.geometric_radii = true;
    radii.clear();
    for (double r = lat.cell_side(); r < 2.0 * std::sqrt(static_cast<double>(lat.dimension())); r *= 2.0) radii.push_back(r);
  }
  bool found = false;
  for (std::int64_t x = 0; x < lat.cell_count(); ++x) {
    const std::vector<double> center = lat.cell_center(x);
    for (double r : radii) {
      const double small = c(lat.ball_cells(Ball{center, r}));
      const double big = c(lat.ball_cells(Ball{center, 2.0 * r}));
      ++out.ball_pairs;
      if (small == 0.0 && big == 0.0) continue;
      const double ratio = small == 0.0 ? kInfinity : big / small;
      if (!found || ratio > out.ball) {
        found = true;
        out.ball = ratio;
        out.ball_center = center;
        out.ball_radius = r;
      }
    }
  }
  return out;
}

TheoremConstants jn_constants(double m0) {
  TheoremConstants k;
  k.M0 = m0;
  k.D = m0;
  k.A0 = 2.0;
  k.Cprime = 2.0;
  k.cprime = 2.0 + 2.0 * m0;
  const double e = std::numbers::e;
  k.C_jn = std::exp(1.0 / (2.0 * k.Cprime * e) + 1.0);
  k.c_jn = 1.0 / (2.0 * k.Cprime * k.cprime * e);
  return k;
}

TheoremConstants theorem_constants(const SetFunction& c) {
  const DoublingReport d = doubling_constants(c);
  TheoremConstants k = jn_constants(d.dyadic);
  k.D0 = d.ball;
  return k;
}

}  // namespace dyadic
