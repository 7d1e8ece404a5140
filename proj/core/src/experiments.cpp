#include "dyadic/experiments.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "dyadic/choquet.hpp"
#include "dyadic/decompositions.hpp"
#include "dyadic/equivalence.hpp"
#include "dyadic/extended.hpp"
#include "dyadic/maximal.hpp"
#include "dyadic/sampling.hpp"

namespace dyadic {
namespace {

constexpr double kTolerance = 1e-9;

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hexfloat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

std::string config_bytes(const Lattice& lat) {
  std::string s = "n=" + std::to_string(lat.dimension()) + ";L=" + std::to_string(lat.finest_level()) + ";anchor=";
  for (auto a : lat.config().anchor) s += std::to_string(a) + ",";
  return s;
}

Measurement upper(std::string quantity, double value, double bound) {
  Measurement m;
  m.quantity = std::move(quantity);
  m.value = value;
  m.bound = bound;
  m.relation = "<=";
  m.pass = value <= bound + kTolerance;
  return m;
}

Measurement lower(std::string quantity, double value, double bound) {
  Measurement m;
  m.quantity = std::move(quantity);
  m.value = value;
  m.bound = bound;
  m.relation = ">=";
  m.pass = value >= bound;
  return m;
}

Measurement reported(std::string quantity, double value) {
  Measurement m;
  m.quantity = std::move(quantity);
  m.value = value;
  return m;
}

// Positive values of g, their midpoints and the midpoint below the smallest.
std::vector<double> t_grid(const std::vector<double>& values) {
  std::vector<double> pos;
  for (double v : values) {
    if (v > 0.0 && !is_infinite(v)) pos.push_back(v);
  }
  std::vector<double> out = pos;
  if (!pos.empty()) out.push_back(0.5 * pos.front());
  for (std::size_t i = 0; i + 1 < pos.size(); ++i) out.push_back(0.5 * (pos[i] + pos[i + 1]));
  std::sort(out.begin(), out.end());
  return out;
}

struct WeakPeak {
  double ratio = 0.0;
  double t = 0.0;
  bool left_limit = false;
};

// Sup over t > 0 of t H({m > t}) / integral, probing grid points and the
// left limits v H({m >= v}).
WeakPeak weak_peak(const GridFunction& m, const SetFunction& h, double integral) {
  WeakPeak best;
  if (integral == 0.0 || is_infinite(integral)) return best;
  const auto values = distinct_values(m);
  for (double t : t_grid(values)) {
    const double r = t * h(m.superlevel(t)) / integral;
    if (r > best.ratio) best = {r, t, false};
  }
  for (double v : values) {
    if (!(v > 0.0) || is_infinite(v)) continue;
    const double r = v * h(m.superlevel_closed(v)) / integral;
    if (r > best.ratio) best = {r, v, true};
  }
  return best;
}

std::string describe_t(const WeakPeak& p) { return p.left_limit ? real(p.t) + " (left limit)" : real(p.t); }

}  // namespace

void ExperimentReport::add(Measurement m) {
  pass = pass && m.pass;
  measurements.push_back(std::move(m));
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, hash);
  return buf;
}

std::string digest_of(const GridFunction& f) {
  std::string s = config_bytes(f.lattice());
  for (double v : f.linear_values()) s += hexfloat(v) + ";";
  return fnv1a_hex(s);
}

GridFunction spike_function(const Lattice& lattice) {
  GridFunction f(lattice);
  f.set(0, 4.0);
  return f;
}

GridFunction leading_zero_bits_function(const Lattice& lattice) {
  GridFunction f(lattice);
  const int D = lattice.depth();
  for (std::int64_t c = 0; c < lattice.cell_count(); ++c) {
    const auto i = static_cast<std::uint64_t>(lattice.cell_index(c).front());
    f.set(c, static_cast<double>(D - std::bit_width(i)));
  }
  return f;
}

std::vector<NamedFunction> function_battery(const Lattice& lattice, std::uint64_t seed, int random_count) {
  std::vector<NamedFunction> out;
  out.push_back({"spike", spike_function(lattice)});
  out.push_back({"constant 1", GridFunction(lattice, 1.0)});
  out.push_back({"constant 3", GridFunction(lattice, 3.0)});
  if (lattice.dimension() == 1 && lattice.depth() > 0) out.push_back({"leading zero bits", leading_zero_bits_function(lattice)});
  for (int i = 0; i < random_count; ++i) {
    Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(i));
    const double height = 1.0 + static_cast<double>(rng.below(4));
    const int cubes = 1 + static_cast<int>(rng.below(4));
    out.push_back({"cube union indicator " + std::to_string(i), GridFunction::indicator(random_cube_union(lattice, rng, cubes), height)});
    out.push_back({"step function " + std::to_string(i), random_step_function(lattice, rng)});
    out.push_back({"random function " + std::to_string(i), random_function(lattice, rng, 4.0)});
  }
  return out;
}

double weak_type_ratio(const GridFunction& f, const SetFunction& h, double t) {
  const GridFunction g = f.abs();
  const double integral = choquet_integral(g, h);
  if (integral == 0.0) return 0.0;
  const GridFunction m = dyadic_maximal(g, h).values;
  return t * h(m.superlevel(t)) / integral;
}

ExperimentReport weak_type_experiment(const std::vector<NamedFunction>& functions, const SetFunction& h, bool with_ball) {
  const Stopwatch clock;
  ExperimentReport report;
  report.name = "weak";
  report.constants["bound"] = 2.0;
  std::string digest = config_bytes(h.lattice()) + h.name();
  double worst = 0.0;
  double worst_ball = 0.0;
  for (const auto& nf : functions) {
    digest += digest_of(nf.f);
    const GridFunction g = nf.f.abs();
    const double integral = choquet_integral(g, h);
    const WeakPeak peak = weak_peak(dyadic_maximal(g, h).values, h, integral);
    Measurement m = upper("dyadic weak-type ratio: " + nf.name, peak.ratio, 2.0);
    m.context["t"] = describe_t(peak);
    m.context["integral"] = real(integral);
    worst = std::max(worst, peak.ratio);
    report.add(std::move(m));
    if (with_ball) {
      const WeakPeak ball = weak_peak(ball_maximal(g, h, true).values, h, integral);
      Measurement b = reported("ball weak-type ratio: " + nf.name, ball.ratio);
      b.context["t"] = describe_t(ball);
      worst_ball = std::max(worst_ball, ball.ratio);
      report.add(std::move(b));
    }
  }
  report.add(upper("max dyadic weak-type ratio", worst, 2.0));
  if (with_ball) report.add(reported("max ball weak-type ratio", worst_ball));
  report.inputs_digest = fnv1a_hex(digest);
  report.runtime_ms = clock.ms();
  return report;
}

ExperimentReport strong_type_experiment(const std::vector<NamedFunction>& functions, const SetFunction& h, double p) {
  require_not_nan(p, "p");
  if (!(p > 1.0) || is_infinite(p)) throw std::invalid_argument("strong-type experiment needs 1 < p < inf");
  const Stopwatch clock;
  ExperimentReport report;
  report.name = "strong";
  const double cap = 4.0 * std::pow(2.0, p) * p / (p - 1.0) * 2.0;
  report.constants["p"] = p;
  report.constants["cap"] = cap;
  std::string digest = config_bytes(h.lattice()) + h.name() + real(p);
  double worst = 0.0;
  for (const auto& nf : functions) {
    digest += digest_of(nf.f);
    const GridFunction g = nf.f.abs();
    const double denom = choquet_integral(g.pow(p), h);
    if (denom == 0.0 || is_infinite(denom)) continue;
    const double numer = choquet_integral(dyadic_maximal(g, h).values.pow(p), h);
    const double ratio = numer / denom;
    worst = std::max(worst, ratio);
    Measurement m = upper("strong-type ratio: " + nf.name, ratio, cap);
    m.context["cap"] = "interpolation-derived";
    report.add(std::move(m));
  }
  report.add(upper("max strong-type ratio", worst, cap));
  report.inputs_digest = fnv1a_hex(digest);
  report.runtime_ms = clock.ms();
  return report;
}

ExperimentReport differentiation_experiment(const std::function<double(const std::vector<double>&)>& f, double lipschitz,
                                            int dimension, const std::vector<int>& levels,
                                            const std::function<SetFunction(const Lattice&)>& make_h,
                                            const std::string& label) {
  const Stopwatch clock;
  if (levels.empty()) throw std::invalid_argument("differentiation experiment needs at least one level");
  std::vector<int> order = levels;
  std::sort(order.begin(), order.end(), std::greater<>());
  ExperimentReport report;
  report.name = "differentiation";
  report.constants["lipschitz"] = lipschitz;
  report.constants["slack"] = 1.05;
  std::string digest = label + real(lipschitz) + std::to_string(dimension);
  double previous = -1.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Lattice lat(dimension, order[i]);
    if (lat.depth() < 1) throw std::invalid_argument("differentiation levels must be below 0");
    const SetFunction h = make_h(lat);
    GridFunction g(lat);
    for (std::int64_t c = 0; c < lat.cell_count(); ++c) g.set(c, f(lat.cell_center(c)));
    digest += digest_of(g);
    double worst = 0.0;
    for (std::int64_t c = 0; c < lat.cell_count(); ++c) {
      const CubeId cell = lat.cube_at(lat.depth(), lat.to_morton(c));
      worst = std::max(worst, mean_deviation(g, lat.parent(cell), h, g.at(c)));
    }
    Measurement m = previous < 0.0 ? reported("tower deviation", worst) : upper("tower deviation", worst, 1.05 * previous);
    m.context["level"] = std::to_string(order[i]);
    report.add(std::move(m));
    previous = worst;
    if (i + 1 == order.size()) {
      const double bound = lipschitz * std::ldexp(1.0, order[i]) * std::sqrt(static_cast<double>(dimension));
      Measurement fin = upper("final tower deviation", worst, bound);
      fin.context["level"] = std::to_string(order[i]);
      report.add(std::move(fin));
    }
  }
  report.inputs_digest = fnv1a_hex(digest);
  report.runtime_ms = clock.ms();
  return report;
}

ExperimentReport jn_experiment(const GridFunction& f, const SetFunction& h, const CubeId& q0, int random_cubes,
                               std::uint64_t seed) {
  const Stopwatch clock;
  const Lattice& lat = f.lattice();
  lat.validate(q0);
  ExperimentReport report;
  report.name = "jn";
  report.inputs_digest = fnv1a_hex(digest_of(f) + h.name() + to_string(q0) + std::to_string(random_cubes) + std::to_string(seed));
  const double bmo = bmo_norm(f, h, q0);
  const TheoremConstants k = jn_constants(dyadic_doubling(h).value);
  report.constants = {{"A0", k.A0}, {"M0", k.M0}, {"D", k.D}, {"Cprime", k.Cprime}, {"cprime", k.cprime},
                      {"C_jn", k.C_jn}, {"c_jn", k.c_jn}, {"bmo", bmo}};
  if (bmo == 0.0) {
    Measurement m = reported("bmo norm", 0.0);
    m.context["note"] = "zero oscillation; the tail is null for every t > 0";
    report.add(std::move(m));
    report.runtime_ms = clock.ms();
    return report;
  }

  const int d0 = -q0.level;
  const std::int64_t p0 = lat.prefix(q0);
  const int n = lat.dimension();
  std::vector<CubeId> cubes;
  const int shallow = std::min(lat.depth(), d0 + 4);
  for (int d = d0; d <= shallow; ++d) {
    for (std::int64_t j = 0; j < (std::int64_t{1} << (n * (d - d0))); ++j) cubes.push_back(lat.cube_at(d, (p0 << (n * (d - d0))) + j));
  }
  if (lat.depth() > shallow) {
    Rng rng = Rng::for_trial(seed, 0);
    for (int i = 0; i < random_cubes; ++i) {
      const int d = shallow + 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(lat.depth() - shallow)));
      const auto j = static_cast<std::int64_t>(rng.below(std::uint64_t{1} << (n * (d - d0))));
      cubes.push_back(lat.cube_at(d, (p0 << (n * (d - d0))) + j));
    }
  }

  double min_slack = kInfinity;
  double sxx = 0.0, sxy = 0.0, sx = 0.0, sy = 0.0;
  std::int64_t points = 0;
  std::string worst_at;
  for (const CubeId& q : cubes) {
    const double cap = h.cube_value(q);
    const BestConstant bc = best_constant(f, q, h);
    const std::int64_t span = lat.cells_below(-q.level);
    const std::int64_t begin = lat.prefix(q) * span;
    GridFunction g(lat);
    std::vector<double> values;
    for (std::int64_t m = begin; m < begin + span; ++m) {
      const double v = std::fabs(f.at_morton(m) - bc.c);
      g.set(lat.to_linear(m), v);
      values.push_back(v);
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::vector<double> grid = t_grid(values);
    grid.insert(grid.begin(), 0.0);
    for (double t : grid) {
      GridSet level(lat);
      for (std::int64_t m = begin; m < begin + span; ++m) {
        if (g.at_morton(m) > t) level.set_morton(m, true);
      }
      const double tail = h.within(level, q);
      const double bound = k.C_jn * cap * std::exp(-k.c_jn * t / bmo);
      const double slack = bound + kTolerance - tail;
      if (slack < min_slack) {
        min_slack = slack;
        worst_at = to_string(q) + " t=" + real(t);
      }
      report.tails.push_back({to_string(q), t, tail, bound});
      if (tail > 0.0 && cap > 0.0) {
        const double x = t / bmo;
        const double y = std::log(tail / cap);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++points;
      }
    }
  }
  Measurement slack = lower("min tail-bound slack", min_slack, 0.0);
  slack.context["attained at"] = worst_at;
  slack.context["cubes"] = std::to_string(cubes.size());
  report.add(std::move(slack));
  const double denom = static_cast<double>(points) * sxx - sx * sx;
  if (points >= 2 && denom > 0.0) {
    Measurement fit = reported("fitted log-tail slope", (static_cast<double>(points) * sxy - sx * sy) / denom);
    fit.context["compare with"] = real(-k.c_jn);
    report.add(std::move(fit));
  }
  report.runtime_ms = clock.ms();
  return report;
}

ExperimentReport maximal_comparison(const std::vector<NamedFunction>& functions, const SetFunction& h) {
  const Stopwatch clock;
  const Lattice& lat = h.lattice();
  const int n = lat.dimension();
  ExperimentReport report;
  report.name = "comparison";
  std::string digest = config_bytes(lat) + h.name();

  double ball_ratio = kInfinity;
  std::size_t max_cover = 0;
  for (std::int64_t x = 0; x < lat.cell_count(); ++x) {
    const auto center = lat.cell_center(x);
    for (double r : ball_radii(lat)) {
      const Ball ball{center, r};
      const double hb = h(lat.ball_cells(ball));
      const BallCover cover = lat.covering_cubes_for_ball(ball);
      max_cover = std::max(max_cover, cover.cubes.size());
      for (const auto& q : cover.cubes) {
        const double hq = h.cube_value(q);
        if (hq > 0.0) ball_ratio = std::min(ball_ratio, hb / hq);
      }
    }
  }
  const double pieces = std::max(std::ldexp(1.0, n), static_cast<double>(max_cover));
  const double c = ball_ratio / pieces;
  const double big_c = std::pow(3.0, n);
  report.constants = {{"ball_to_cube_ratio", ball_ratio}, {"cover_pieces", pieces}, {"c", c}, {"C", big_c}};

  double worst_centered = 0.0;
  double worst_comparison = 0.0;
  double worst_triple = 0.0;
  double worst_geometry = 0.0;
  bool comparison_ok = true;
  bool geometry_ok = true;
  for (const auto& nf : functions) {
    digest += digest_of(nf.f);
    const GridFunction g = nf.f.abs();
    const GridFunction unc = ball_maximal(g, h, false).values;
    const GridFunction cen = ball_maximal(g, h, true).values;
    const GridFunction dya = dyadic_maximal(g, h).values;
    for (std::int64_t x = 0; x < lat.cell_count(); ++x) worst_centered = std::max(worst_centered, cen.at(x) - unc.at(x));

    const auto values = distinct_values(unc);
    struct Probe {
      GridSet e;
      double t;
      bool left;
    };
    std::vector<Probe> probes;
    for (double t : t_grid(values)) probes.push_back({unc.superlevel(t), t, false});
    for (double v : values) {
      if (v > 0.0 && !is_infinite(v)) probes.push_back({unc.superlevel_closed(v), v, true});
    }
    for (const auto& [e, t, left] : probes) {
      const GridSet l = left ? dya.superlevel_closed(c * t) : dya.superlevel(c * t);
      const double he = h(e);
      const double hl = h(l);
      if (he > big_c * hl + kTolerance) {
        comparison_ok = false;
      }
      worst_comparison = std::max(worst_comparison, hl == 0.0 ? (he == 0.0 ? 0.0 : kInfinity) : he / hl);
      GridSet tripled(lat);
      for (const auto& q : maximal_dyadic_partition(l)) tripled |= lat.triple(q);
      const double ht = h(tripled);
      if (hl > 0.0) worst_triple = std::max(worst_triple, ht / hl);
      if (he > ht + kTolerance) geometry_ok = false;
      worst_geometry = std::max(worst_geometry, he - ht);
    }
  }
  report.add(upper("centered minus uncentered", worst_centered, 0.0));
  Measurement cmp = upper("H(uncentered > t) / H(dyadic > ct)", worst_comparison, big_c);
  cmp.pass = comparison_ok;
  report.add(std::move(cmp));
  Measurement geo = upper("H(uncentered > t) - H(union of tripled cubes)", worst_geometry, 0.0);
  geo.pass = geometry_ok;
  report.add(std::move(geo));
  report.add(reported("empirical triple-cube constant", worst_triple));
  report.inputs_digest = fnv1a_hex(digest);
  report.runtime_ms = clock.ms();
  return report;
}

}  // namespace dyadic
