#include "dyadic/choquet.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>

#include "dyadic/extended.hpp"

namespace dyadic {
namespace {

// Subtrees with at most this many cells are solved in one flat buffer.
constexpr int kBlockBits = 16;

bool prefer_coarse(double lambda, double children) { return lambda <= children * (1.0 + 1e-12); }

class ContentImpl final : public detail::SetFunctionImpl {
 public:
  explicit ContentImpl(CubeGauge gauge) : SetFunctionImpl(gauge.lattice()), gauge_(std::move(gauge)) {
    cube_values_ = restricted(GridSet::full(lattice_));
  }

  double evaluate(const GridSet& set) const override { return subtree_cost(set, 0, 0); }

  double evaluate_within(const GridSet& set, int depth, std::int64_t prefix) const override {
    return subtree_cost(set, depth, prefix);
  }

  CubeField restricted(const GridSet& set) const override {
    const int D = lattice_.depth();
    const int k = lattice_.children_per_cube();
    CubeField field(lattice_, 0.0);
    for (std::int64_t m = 0; m < lattice_.cell_count(); ++m) {
      if (set.test_morton(m)) field.set(D, m, gauge_.at(D, m));
    }
    for (int d = D - 1; d >= 0; --d) {
      const auto below = field.row(d + 1);
      for (std::int64_t p = 0; p < lattice_.cubes_at_depth(d); ++p) {
        double s = 0.0;
        for (int c = 0; c < k; ++c) s += below[static_cast<std::size_t>(p * k + c)];
        if (s > 0.0) field.set(d, p, std::min(gauge_.at(d, p), s));
      }
    }
    return field;
  }

  const CubeGauge* content_gauge() const override { return &gauge_; }

 private:
  // Reduces v, holding consecutive node costs at depth `from` below the
  // depth-`to` node `base`, in place until v[0] is the cost of `base`.
  void reduce(std::vector<double>& v, int from, int to, std::int64_t base) const {
    const int n = lattice_.dimension();
    const int k = lattice_.children_per_cube();
    for (int d = from - 1; d >= to; --d) {
      const std::int64_t count = std::int64_t{1} << (n * (d - to));
      const std::int64_t first = base << (n * (d - to));
      for (std::int64_t j = 0; j < count; ++j) {
        double s = 0.0;
        for (int c = 0; c < k; ++c) s += v[static_cast<std::size_t>(j * k + c)];
        v[static_cast<std::size_t>(j)] = s > 0.0 ? std::min(gauge_.at(d, first + j), s) : 0.0;
      }
    }
  }

  double subtree_cost(const GridSet& set, int depth, std::int64_t prefix) const {
    const int D = lattice_.depth();
    const int n = lattice_.dimension();
    const int block = std::max(depth, D - kBlockBits / n);
    const std::int64_t blocks = std::int64_t{1} << (n * (block - depth));
    const std::int64_t span = lattice_.cells_below(block);
    std::vector<double> top(static_cast<std::size_t>(blocks), 0.0);
    std::vector<double> buf;
    for (std::int64_t i = 0; i < blocks; ++i) {
      const std::int64_t q = (prefix << (n * (block - depth))) + i;
      const std::int64_t begin = q * span;
      if (!set.any_in_morton_range(begin, begin + span)) continue;
      buf.assign(static_cast<std::size_t>(span), 0.0);
      for (std::int64_t m = 0; m < span; ++m) {
        if (set.test_morton(begin + m)) buf[static_cast<std::size_t>(m)] = gauge_.at(D, begin + m);
      }
      reduce(buf, D, block, q);
      top[static_cast<std::size_t>(i)] = buf[0];
    }
    reduce(top, block, depth, prefix);
    return top[0];
  }

  CubeGauge gauge_;
};

SetFunctionInfo content_info(const CubeGauge& gauge) {
  SetFunctionInfo info;
  info.name = "content[" + gauge.name() + "]";
  info.subadditive_claimed = true;
  info.doubling_claimed = true;
  info.submodular_claimed = true;
  info.notes = "dyadic Hausdorff content, exact tree program";
  return info;
}

}  // namespace

namespace detail {

double layer_cake(const Lattice& lattice, std::vector<std::pair<double, std::int64_t>> entries,
                  const std::function<double(const GridSet&)>& measure) {
  for (const auto& e : entries) {
    if (e.first < 0.0) throw std::invalid_argument("Choquet integral needs a nonnegative integrand; pass |f|");
  }
  std::erase_if(entries, [](const auto& e) { return e.first == 0.0; });
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  GridSet level(lattice);
  double total = 0.0;
  std::size_t i = 0;
  while (i < entries.size()) {
    const double t = entries[i].first;
    while (i < entries.size() && entries[i].first == t) level.set_morton(entries[i++].second, true);
    const double below = i < entries.size() ? entries[i].first : 0.0;
    const double h = measure(level);
    if (is_infinite(t)) {
      if (h > 0.0) return kInfinity;
      continue;
    }
    total += saturating_mul(t - below, h);
  }
  return total;
}

}  // namespace detail

ContentHandle::ContentHandle(CubeGauge gauge)
    : SetFunction(std::make_shared<ContentImpl>(gauge), content_info(gauge)) {}

ContentCover ContentHandle::cover(const GridSet& set) const {
  const Lattice& lat = lattice();
  const CubeField field = restricted(set);
  const CubeGauge& lambda = gauge();
  const int D = lat.depth();
  const int k = lat.children_per_cube();
  ContentCover out;
  out.cost = field.at(0, 0);
  std::vector<std::pair<int, std::int64_t>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [d, p] = stack.back();
    stack.pop_back();
    const std::int64_t span = lat.cells_below(d);
    if (!set.any_in_morton_range(p * span, (p + 1) * span)) continue;
    if (d == D) {
      out.cubes.push_back(lat.cube_at(d, p));
      continue;
    }
    double s = 0.0;
    for (int c = 0; c < k; ++c) s += field.at(d + 1, p * k + c);
    if (prefer_coarse(lambda.at(d, p), s)) {
      out.cubes.push_back(lat.cube_at(d, p));
      continue;
    }
    for (int c = k; c-- > 0;) stack.push_back({d + 1, p * k + c});
  }
  std::sort(out.cubes.begin(), out.cubes.end());
  return out;
}

ContentHandle make_content(const Lattice& lattice, const Gauge& gauge) {
  return ContentHandle(CubeGauge::from_gauge(lattice, gauge));
}

double content(const GridSet& set, const CubeGauge& lambda) { return ContentHandle(lambda)(set); }

ContentCover content_cover(const GridSet& set, const CubeGauge& lambda) { return ContentHandle(lambda).cover(set); }

double choquet_integral(const GridFunction& f, const SetFunction& h) {
  return choquet_integral(f, h, GridSet::full(f.lattice()));
}

double choquet_integral(const GridFunction& f, const SetFunction& h, const GridSet& region) {
  if (!(f.lattice() == h.lattice())) throw std::invalid_argument("function and set function live on different lattices");
  const Lattice& lat = f.lattice();
  std::vector<std::pair<double, std::int64_t>> entries;
  for (std::int64_t m = 0; m < lat.cell_count(); ++m) {
    if (region.test_morton(m)) entries.emplace_back(f.at_morton(m), m);
  }
  const CubeId hull = lat.smallest_cube_containing(region);
  return detail::layer_cake(lat, std::move(entries), [&](const GridSet& s) { return h.within(s, hull); });
}

double choquet_integral_on_cube(const GridFunction& f, const CubeId& cube, const SetFunction& h) {
  if (!(f.lattice() == h.lattice())) throw std::invalid_argument("function and set function live on different lattices");
  const Lattice& lat = f.lattice();
  const std::int64_t span = lat.cells_below(-cube.level);
  const std::int64_t begin = lat.prefix(cube) * span;
  std::vector<std::pair<double, std::int64_t>> entries;
  entries.reserve(static_cast<std::size_t>(span));
  for (std::int64_t m = begin; m < begin + span; ++m) entries.emplace_back(f.at_morton(m), m);
  return detail::layer_cake(lat, std::move(entries), [&](const GridSet& s) { return h.within(s, cube); });
}

double average(const GridFunction& f, const CubeId& cube, const SetFunction& h) {
  const double cap = h.cube_value(cube);
  if (cap == 0.0) return 0.0;
  return convention_ratio(choquet_integral_on_cube(f, cube, h), cap);
}

double lp_norm(const GridFunction& f, const SetFunction& h, const GridSet& region, double p) {
  require_not_nan(p, "lp_norm exponent");
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm needs p >= 1");
  const double integral = choquet_integral(f.pow(p), h, region);
  return p == 1.0 ? integral : std::pow(integral, 1.0 / p);
}

double lp_norm(const GridFunction& f, const SetFunction& h, double p) {
  return lp_norm(f, h, GridSet::full(f.lattice()), p);
}

CubeAverages cube_averages(const GridFunction& f, const SetFunction& h) {
  if (!(f.lattice() == h.lattice())) throw std::invalid_argument("function and set function live on different lattices");
  const Lattice& lat = f.lattice();
  if (!f.is_nonnegative()) throw std::invalid_argument("Choquet integral needs a nonnegative integrand; pass |f|");
  CubeAverages out{CubeField(lat, 0.0), h.cube_values(), CubeField(lat, 0.0)};
  std::vector<std::int64_t> order;
  for (std::int64_t m = 0; m < lat.cell_count(); ++m) {
    if (f.at_morton(m) > 0.0) order.push_back(m);
  }
  std::sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) { return f.at_morton(a) > f.at_morton(b); });
  GridSet level(lat);
  std::size_t i = 0;
  while (i < order.size()) {
    const double t = f.at_morton(order[i]);
    while (i < order.size() && f.at_morton(order[i]) == t) level.set_morton(order[i++], true);
    const double below = i < order.size() ? f.at_morton(order[i]) : 0.0;
    const CubeField part = h.restricted(level);
    for (int d = 0; d <= lat.depth(); ++d) {
      for (std::int64_t p = 0; p < lat.cubes_at_depth(d); ++p) {
        const double hv = part.at(d, p);
        if (hv == 0.0) continue;
        const double add = is_infinite(t) ? kInfinity : saturating_mul(t - below, hv);
        out.integral.set(d, p, out.integral.at(d, p) + add);
      }
    }
  }
  for (int d = 0; d <= lat.depth(); ++d) {
    for (std::int64_t p = 0; p < lat.cubes_at_depth(d); ++p) {
      out.average.set(d, p, convention_ratio(out.integral.at(d, p), out.capacity.at(d, p)));
    }
  }
  return out;
}

std::vector<double> distinct_values(const GridFunction& f, const GridSet& region) {
  std::vector<double> out;
  for (std::int64_t m = 0; m < f.lattice().cell_count(); ++m) {
    if (region.test_morton(m)) out.push_back(f.at_morton(m));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> distinct_values(const GridFunction& f) {
  std::vector<double> out(f.morton_values().begin(), f.morton_values().end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace dyadic
