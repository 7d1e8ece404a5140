#include "dyadic/decompositions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "dyadic/choquet.hpp"
#include "dyadic/extended.hpp"

namespace dyadic {
namespace {

using Node = std::pair<int, std::int64_t>;

Node node_of(const Lattice& lat, const CubeId& cube) { return {-cube.level, lat.prefix(cube)}; }

std::int64_t ancestor_prefix(const Lattice& lat, const Node& node, int depth) {
  return node.second >> (lat.dimension() * (node.first - depth));
}

void require_disjoint(const Lattice& lat, const std::vector<CubeId>& family) {
  std::map<std::int64_t, std::size_t> begins;
  for (std::size_t i = 0; i < family.size(); ++i) {
    lat.validate(family[i]);
    const std::int64_t span = lat.cells_below(-family[i].level);
    const std::int64_t begin = lat.prefix(family[i]) * span;
    auto next = begins.lower_bound(begin);
    auto clash = [&](std::size_t j) {
      throw std::invalid_argument("family cubes overlap: " + to_string(family[j]) + " and " + to_string(family[i]));
    };
    if (next != begins.end()) {
      if (next->first < begin + span) clash(next->second);
    }
    if (next != begins.begin()) {
      const auto& prev = *std::prev(next);
      const CubeId& other = family[prev.second];
      if (prev.first + lat.cells_below(-other.level) > begin) clash(prev.second);
    }
    begins.emplace(begin, i);
  }
}

bool within_bound(double sum, double constant, double lambda) {
  if (is_infinite(lambda)) return true;
  return sum <= constant * lambda;
}

}  // namespace

PackingSelection packing_select(std::vector<CubeId> family, const CubeGauge& lambda, double constant) {
  const Lattice& lat = lambda.lattice();
  require_not_nan(constant, "packing constant");
  if (!(constant >= 1.0)) throw std::invalid_argument("packing constant must be at least 1");
  require_disjoint(lat, family);
  std::sort(family.begin(), family.end(), [](const CubeId& a, const CubeId& b) {
    if (a.level != b.level) return a.level > b.level;
    return a.index < b.index;
  });

  PackingSelection out;
  out.constant = constant;
  std::map<Node, double> inside;
  std::vector<std::pair<CubeId, CubeId>> rejected;
  for (const CubeId& cube : family) {
    const Node node = node_of(lat, cube);
    const double value = lambda.at(node.first, node.second);
    int violating = -1;
    for (int d = node.first; d >= 0; --d) {
      const Node a{d, ancestor_prefix(lat, node, d)};
      const auto it = inside.find(a);
      const double sum = (it == inside.end() ? 0.0 : it->second) + value;
      if (!within_bound(sum, constant, lambda.at(a.first, a.second))) {
        violating = d;
        break;
      }
    }
    if (violating >= 0) {
      rejected.emplace_back(cube, lat.cube_at(violating, ancestor_prefix(lat, node, violating)));
      continue;
    }
    for (int d = node.first; d >= 0; --d) inside[{d, ancestor_prefix(lat, node, d)}] += value;
    out.selected.push_back(cube);
  }

  std::vector<CubeId> witnesses;
  for (const auto& r : rejected) witnesses.push_back(r.second);
  std::sort(witnesses.begin(), witnesses.end(), [](const CubeId& a, const CubeId& b) {
    if (a.level != b.level) return a.level > b.level;
    return a.index < b.index;
  });
  witnesses.erase(std::unique(witnesses.begin(), witnesses.end()), witnesses.end());
  for (const CubeId& w : witnesses) {
    const bool covered = std::any_of(out.ancestors.begin(), out.ancestors.end(), [&](const CubeId& a) { return contains(a, w); });
    (covered ? out.pruned : out.ancestors).push_back(w);
  }
  for (const auto& [dropped, witness] : rejected) {
    const auto keeper = std::find_if(out.ancestors.begin(), out.ancestors.end(),
                                     [&](const CubeId& a) { return contains(a, witness); });
    out.provenance.push_back({dropped, witness, *keeper});
  }
  return out;
}

PackingCheck verify_packing(const PackingSelection& selection, const std::vector<CubeId>& family, const CubeGauge& lambda) {
  const Lattice& lat = lambda.lattice();
  PackingCheck check;
  GridSet covered(lat);
  for (const auto& c : selection.selected) covered |= lat.cells(c);
  for (const auto& c : selection.ancestors) covered |= lat.cells(c);
  for (const auto& c : family) {
    if (!lat.cells(c).is_subset_of(covered)) {
      check.covers = false;
      check.detail = "family cube " + to_string(c) + " is not covered";
    }
  }

  const int D = lat.depth();
  const int k = lat.children_per_cube();
  CubeField sums(lat, 0.0);
  for (const auto& c : selection.selected) {
    const Node node = node_of(lat, c);
    sums.set(node.first, node.second, sums.at(node.first, node.second) + lambda.at(node.first, node.second));
  }
  for (int d = D - 1; d >= 0; --d) {
    for (std::int64_t p = 0; p < lat.cubes_at_depth(d); ++p) {
      double s = sums.at(d, p);
      for (int c = 0; c < k; ++c) s += sums.at(d + 1, p * k + c);
      sums.set(d, p, s);
    }
  }
  for (int d = 0; d <= D; ++d) {
    for (std::int64_t p = 0; p < lat.cubes_at_depth(d); ++p) {
      ++check.cubes_checked;
      const double lam = lambda.at(d, p);
      if (!is_infinite(lam) && sums.at(d, p) > selection.constant * lam * (1.0 + 1e-12)) {
        check.sums_bounded = false;
        check.detail = "selected sum inside " + to_string(lat.cube_at(d, p)) + " exceeds the bound";
      }
    }
  }
  for (const auto& a : selection.ancestors) {
    const Node node = node_of(lat, a);
    if (lambda.at(node.first, node.second) > sums.at(node.first, node.second) * (1.0 + 1e-12)) {
      check.ancestors_paid = false;
      check.detail = "ancestor " + to_string(a) + " costs more than the selected cubes inside it";
    }
  }
  for (std::size_t i = 0; i < selection.ancestors.size(); ++i) {
    for (std::size_t j = i + 1; j < selection.ancestors.size(); ++j) {
      if (overlaps(selection.ancestors[i], selection.ancestors[j])) {
        check.ancestors_disjoint = false;
        check.detail = "ancestors " + to_string(selection.ancestors[i]) + " and " + to_string(selection.ancestors[j]) + " overlap";
      }
    }
  }
  return check;
}

PackingIntegralReport packing_integral_check(const std::vector<CubeId>& cubes, const GridFunction& f, const SetFunction& h,
                                             double a0) {
  PackingIntegralReport report;
  report.a0 = a0;
  const Lattice& lat = f.lattice();
  GridSet all(lat);
  for (const auto& c : cubes) {
    report.lhs += choquet_integral_on_cube(f, c, h);
    all |= lat.cells(c);
  }
  report.rhs = choquet_integral(f, h, all);
  report.pass = report.lhs <= a0 * report.rhs + 1e-9;
  return report;
}

PackingIntegralReport packing_integral_check(const PackingSelection& selection, const GridFunction& f,
                                             const SetFunction& h, double a0) {
  return packing_integral_check(selection.selected, f, h, a0);
}

DoublingResult dyadic_doubling(const SetFunction& h) {
  const Lattice& lat = h.lattice();
  const CubeField& values = h.cube_values();
  const int n = lat.dimension();
  DoublingResult out;
  out.parent = lat.root();
  out.child = lat.root();
  bool found = false;
  for (int d = 1; d <= lat.depth(); ++d) {
    for (std::int64_t p = 0; p < lat.cubes_at_depth(d); ++p) {
      const double child = values.at(d, p);
      const double parent = values.at(d - 1, p >> n);
      ++out.pairs;
      if (parent == 0.0 && child == 0.0) {
        ++out.skipped;
        continue;
      }
      const double ratio = child == 0.0 ? kInfinity : parent / child;
      if (!found || ratio > out.value) {
        found = true;
        out.value = ratio;
        out.parent = lat.cube_at(d - 1, p >> n);
        out.child = lat.cube_at(d, p);
      }
    }
  }
  return out;
}

CZDecomposition cz_decompose(const GridFunction& f, const CubeId& q, double height, const SetFunction& h) {
  if (!(f.lattice() == h.lattice())) throw std::invalid_argument("function and set function live on different lattices");
  const Lattice& lat = f.lattice();
  lat.validate(q);
  require_not_nan(height, "height");
  if (!(height > 0.0)) throw std::invalid_argument("height must be positive");
  const GridFunction g = f.abs();
  const CubeAverages avg = cube_averages(g, h);
  CZDecomposition out;
  out.root = q;
  out.height = height;
  const int d0 = -q.level;
  const std::int64_t p0 = lat.prefix(q);
  out.root_average = avg.average.at(d0, p0);
  if (std::fabs(out.root_average - height) <= 1e-12 * height) out.root_average = average(g, q, h);
  if (height < out.root_average) throw std::invalid_argument("height below root average");
  out.upper_factor = dyadic_doubling(h).value;

  const int k = lat.children_per_cube();
  GridSet covered(lat);
  std::vector<std::pair<int, std::int64_t>> stack;
  for (int c = k; c-- > 0;) {
    if (d0 < lat.depth()) stack.push_back({d0 + 1, p0 * k + c});
  }
  while (!stack.empty()) {
    const auto [d, p] = stack.back();
    stack.pop_back();
    const CubeId cube = lat.cube_at(d, p);
    double a = avg.average.at(d, p);
    // The batch layer cake groups terms differently; settle near-ties on the cube alone.
    if (std::fabs(a - height) <= 1e-12 * height) a = average(g, cube, h);
    if (a > height) {
      out.cubes.push_back(cube);
      out.averages.push_back(a);
      double pa = avg.average.at(d - 1, p / k);
      if (std::fabs(pa - height) <= 1e-12 * height) pa = average(g, lat.parent(cube), h);
      out.parent_averages.push_back(pa);
      covered |= lat.cells(cube);
      continue;
    }
    if (d == lat.depth()) continue;
    for (int c = k; c-- > 0;) stack.push_back({d + 1, p * k + c});
  }

  const std::int64_t span = lat.cells_below(d0);
  GridSet residual(lat);
  for (std::int64_t m = p0 * span; m < (p0 + 1) * span; ++m) {
    if (!covered.test_morton(m) && g.at_morton(m) > height) residual.set_morton(m, true);
  }
  out.residual_violations = residual.cells();
  out.residual_content = h(residual);
  return out;
}

bool cz_certificate_holds(const CZDecomposition& cz, std::string* reason) {
  auto fail = [&](const std::string& why) {
    if (reason) *reason = why;
    return false;
  };
  for (std::size_t i = 0; i < cz.cubes.size(); ++i) {
    const double a = cz.averages[i];
    if (!(a > cz.height)) return fail("average of " + to_string(cz.cubes[i]) + " does not exceed the height");
    if (!is_infinite(cz.upper_factor) && a > cz.upper_factor * cz.height * (1.0 + 1e-12)) {
      return fail("average of " + to_string(cz.cubes[i]) + " exceeds M0 times the height");
    }
    if (cz.parent_averages[i] > cz.height) return fail("parent of " + to_string(cz.cubes[i]) + " is above the height");
  }
  for (std::size_t i = 0; i < cz.cubes.size(); ++i) {
    for (std::size_t j = i + 1; j < cz.cubes.size(); ++j) {
      if (overlaps(cz.cubes[i], cz.cubes[j])) return fail("stopping cubes overlap");
    }
  }
  if (cz.residual_content != 0.0) return fail("residual violations carry positive capacity");
  return true;
}

std::vector<CubeId> maximal_dyadic_partition(const GridSet& u) {
  const Lattice& lat = u.lattice();
  const int k = lat.children_per_cube();
  std::vector<CubeId> out;
  std::vector<std::pair<int, std::int64_t>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [d, p] = stack.back();
    stack.pop_back();
    const std::int64_t span = lat.cells_below(d);
    if (!u.any_in_morton_range(p * span, (p + 1) * span)) continue;
    if (u.all_in_morton_range(p * span, (p + 1) * span)) {
      out.push_back(lat.cube_at(d, p));
      continue;
    }
    for (int c = k; c-- > 0;) stack.push_back({d + 1, p * k + c});
  }
  return out;
}

}  // namespace dyadic
