#include "dyadic/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "dyadic/choquet.hpp"
#include "dyadic/extended.hpp"

namespace dyadic {
namespace {

// Candidate sets at or below this size are scanned exhaustively.
constexpr std::size_t kFullScan = 128;

void require_same(const GridFunction& f, const SetFunction& h) {
  if (!(f.lattice() == h.lattice())) throw std::invalid_argument("function and set function live on different lattices");
}

void require_nonnegative_function(const GridFunction& f) {
  if (!f.is_nonnegative()) throw std::invalid_argument("maximal operators need a nonnegative function; pass |f|");
}

struct CubeRange {
  std::int64_t begin;
  std::int64_t end;
};

CubeRange range_of(const Lattice& lat, const CubeId& cube) {
  const std::int64_t span = lat.cells_below(-cube.level);
  const std::int64_t p = lat.prefix(cube);
  return {p * span, (p + 1) * span};
}

double deviation_at(const GridFunction& f, const CubeId& cube, const SetFunction& h, double cap, double c) {
  const Lattice& lat = f.lattice();
  const auto [begin, end] = range_of(lat, cube);
  std::vector<std::pair<double, std::int64_t>> entries;
  entries.reserve(static_cast<std::size_t>(end - begin));
  for (std::int64_t m = begin; m < end; ++m) entries.emplace_back(std::fabs(f.at_morton(m) - c), m);
  const double integral = detail::layer_cake(lat, std::move(entries), [&](const GridSet& s) { return h.within(s, cube); });
  return convention_ratio(integral, cap);
}

bool better(double candidate, double best) { return candidate < best - 1e-12 * std::max(1.0, std::fabs(best)); }

std::vector<MaximalWitness> empty_witness(const Lattice& lat) {
  return std::vector<MaximalWitness>(static_cast<std::size_t>(lat.cell_count()));
}

}  // namespace

MaximalResult dyadic_maximal(const GridFunction& f, const SetFunction& h) {
  require_same(f, h);
  require_nonnegative_function(f);
  const Lattice& lat = f.lattice();
  const CubeAverages avg = cube_averages(f, h);
  MaximalResult out{GridFunction(lat), empty_witness(lat)};
  const int D = lat.depth();
  const int n = lat.dimension();
  for (std::int64_t m = 0; m < lat.cell_count(); ++m) {
    double best = -1.0;
    int best_depth = 0;
    for (int d = 0; d <= D; ++d) {
      const double a = avg.average.at(d, m >> (n * (D - d)));
      if (a > best) {
        best = a;
        best_depth = d;
      }
    }
    const std::int64_t linear = lat.to_linear(m);
    out.values.set(linear, best);
    out.witness[static_cast<std::size_t>(linear)] = lat.cube_at(best_depth, m >> (n * (D - best_depth)));
  }
  return out;
}

std::vector<double> ball_radii(const Lattice& lattice) {
  const double side = lattice.cell_side();
  const auto count = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(lattice.dimension())) / side - 1e-9));
  std::vector<double> radii;
  for (int j = 1; j <= count; ++j) radii.push_back(j * side);
  return radii;
}

namespace {

double average_over_cells(const GridFunction& f, const SetFunction& h, const GridSet& cells) {
  if (cells.empty()) return 0.0;
  const CubeId hull = f.lattice().smallest_cube_containing(cells);
  const double cap = h.within(cells, hull);
  if (cap == 0.0) return 0.0;
  return convention_ratio(choquet_integral(f, h, cells), cap);
}

}  // namespace

double ball_average(const GridFunction& f, const SetFunction& h, const Ball& ball) {
  require_same(f, h);
  require_nonnegative_function(f);
  return average_over_cells(f, h, f.lattice().ball_cells(ball));
}

MaximalResult ball_maximal(const GridFunction& f, const SetFunction& h, bool centered) {
  require_same(f, h);
  require_nonnegative_function(f);
  const Lattice& lat = f.lattice();
  const std::vector<double> radii = ball_radii(lat);
  std::map<std::vector<std::uint64_t>, double> cache;
  std::vector<double> best(static_cast<std::size_t>(lat.cell_count()), 0.0);
  MaximalResult out{GridFunction(lat), empty_witness(lat)};
  for (std::int64_t x = 0; x < lat.cell_count(); ++x) {
    const std::vector<double> center = lat.cell_center(x);
    for (double r : radii) {
      Ball ball{center, r};
      const GridSet cells = lat.ball_cells(ball);
      std::vector<std::uint64_t> key(cells.words().begin(), cells.words().end());
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(std::move(key), average_over_cells(f, h, cells)).first;
      const double a = it->second;
      if (centered) {
        auto& slot = best[static_cast<std::size_t>(x)];
        if (a > slot || std::holds_alternative<std::monostate>(out.witness[static_cast<std::size_t>(x)])) {
          slot = a;
          out.witness[static_cast<std::size_t>(x)] = ball;
        }
        continue;
      }
      for (std::int64_t y : cells.cells()) {
        auto& slot = best[static_cast<std::size_t>(y)];
        if (a > slot || std::holds_alternative<std::monostate>(out.witness[static_cast<std::size_t>(y)])) {
          slot = a;
          out.witness[static_cast<std::size_t>(y)] = ball;
        }
      }
    }
  }
  for (std::int64_t x = 0; x < lat.cell_count(); ++x) out.values.set(x, best[static_cast<std::size_t>(x)]);
  return out;
}

double mean_deviation(const GridFunction& f, const CubeId& cube, const SetFunction& h, double c) {
  require_same(f, h);
  require_not_nan(c, "constant");
  return deviation_at(f, cube, h, h.cube_value(cube), c);
}

BestConstant best_constant(const GridFunction& f, const CubeId& cube, const SetFunction& h) {
  require_same(f, h);
  const Lattice& lat = f.lattice();
  const double cap = h.cube_value(cube);
  if (cap == 0.0) return {0.0, 0.0};
  const auto [begin, end] = range_of(lat, cube);
  std::vector<double> values;
  for (std::int64_t m = begin; m < end; ++m) {
    const double v = f.at_morton(m);
    if (std::isinf(v)) throw std::invalid_argument("best constant needs finite function values");
    values.push_back(v);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.size() == 1) return {values.front(), 0.0};

  std::vector<double> candidates = values;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) candidates.push_back(0.5 * (values[i] + values[j]));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  auto phi = [&](std::size_t i) { return deviation_at(f, cube, h, cap, candidates[i]); };
  std::size_t lo = 0;
  std::size_t hi = candidates.size() - 1;
  if (candidates.size() > kFullScan && h.info().submodular_claimed) {
    // Convexity: the first index whose forward step does not decrease.
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (phi(mid + 1) >= phi(mid)) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    const std::size_t centre = lo;
    lo = centre >= 2 ? centre - 2 : 0;
    hi = std::min(candidates.size() - 1, centre + 2);
  }
  BestConstant best{candidates[lo], phi(lo)};
  for (std::size_t i = lo + 1; i <= hi; ++i) {
    const double v = phi(i);
    if (better(v, best.deviation)) best = {candidates[i], v};
  }
  return best;
}

namespace {

// Best-constant deviation of every cube inside q0, by depth and prefix.
CubeField subtree_deviations(const GridFunction& f, const SetFunction& h, const CubeId& q0) {
  const Lattice& lat = f.lattice();
  CubeField out(lat, 0.0);
  const int d0 = -q0.level;
  const std::int64_t p0 = lat.prefix(q0);
  for (int d = d0; d <= lat.depth(); ++d) {
    const std::int64_t count = std::int64_t{1} << (lat.dimension() * (d - d0));
    const std::int64_t first = p0 << (lat.dimension() * (d - d0));
    for (std::int64_t j = 0; j < count; ++j) {
      out.set(d, first + j, best_constant(f, lat.cube_at(d, first + j), h).deviation);
    }
  }
  return out;
}

}  // namespace

MaximalResult sharp_maximal(const GridFunction& f, const SetFunction& h, const CubeId& q0) {
  require_same(f, h);
  const Lattice& lat = f.lattice();
  lat.validate(q0);
  const CubeField dev = subtree_deviations(f, h, q0);
  MaximalResult out{GridFunction(lat), empty_witness(lat)};
  const int D = lat.depth();
  const int n = lat.dimension();
  const int d0 = -q0.level;
  const auto [begin, end] = range_of(lat, q0);
  for (std::int64_t m = begin; m < end; ++m) {
    double best = -1.0;
    int best_depth = d0;
    for (int d = d0; d <= D; ++d) {
      const double v = dev.at(d, m >> (n * (D - d)));
      if (v > best) {
        best = v;
        best_depth = d;
      }
    }
    const std::int64_t linear = lat.to_linear(m);
    out.values.set(linear, best);
    out.witness[static_cast<std::size_t>(linear)] = lat.cube_at(best_depth, m >> (n * (D - best_depth)));
  }
  return out;
}

double bmo_norm(const GridFunction& f, const SetFunction& h, const CubeId& q0) {
  require_same(f, h);
  f.lattice().validate(q0);
  const CubeField dev = subtree_deviations(f, h, q0);
  const Lattice& lat = f.lattice();
  const int d0 = -q0.level;
  const std::int64_t p0 = lat.prefix(q0);
  double best = 0.0;
  for (int d = d0; d <= lat.depth(); ++d) {
    const std::int64_t count = std::int64_t{1} << (lat.dimension() * (d - d0));
    const std::int64_t first = p0 << (lat.dimension() * (d - d0));
    for (std::int64_t j = 0; j < count; ++j) best = std::max(best, dev.at(d, first + j));
  }
  return best;
}

}  // namespace dyadic
