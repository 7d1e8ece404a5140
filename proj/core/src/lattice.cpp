#include "dyadic/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dyadic/grid.hpp"

namespace dyadic {
namespace {

std::int64_t interleave(std::span<const std::int64_t> index, int bits, int dimension) {
  std::int64_t code = 0;
  for (int b = 0; b < bits; ++b) {
    for (int a = 0; a < dimension; ++a) {
      code |= ((index[static_cast<std::size_t>(a)] >> b) & 1) << (b * dimension + a);
    }
  }
  return code;
}

std::vector<std::int64_t> deinterleave(std::int64_t code, int bits, int dimension) {
  std::vector<std::int64_t> index(static_cast<std::size_t>(dimension), 0);
  for (int b = 0; b < bits; ++b) {
    for (int a = 0; a < dimension; ++a) {
      index[static_cast<std::size_t>(a)] |= ((code >> (b * dimension + a)) & 1) << b;
    }
  }
  return index;
}

// Iterates the integer box [lo, hi) componentwise, first axis fastest.
template <typename Visit>
void for_each_in_box(const std::vector<std::int64_t>& lo, const std::vector<std::int64_t>& hi, Visit visit) {
  const std::size_t n = lo.size();
  for (std::size_t a = 0; a < n; ++a) {
    if (lo[a] >= hi[a]) return;
  }
  std::vector<std::int64_t> cur = lo;
  while (true) {
    visit(cur);
    std::size_t a = 0;
    while (a < n) {
      if (++cur[a] < hi[a]) break;
      cur[a] = lo[a];
      ++a;
    }
    if (a == n) return;
  }
}

}  // namespace

std::string to_string(const CubeId& cube) {
  std::string s = "(" + std::to_string(cube.level) + ", [";
  for (std::size_t i = 0; i < cube.index.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(cube.index[i]);
  }
  return s + "])";
}

bool contains(const CubeId& a, const CubeId& b) {
  if (a.index.size() != b.index.size()) {
    throw std::invalid_argument("contains: cubes of different dimension");
  }
  if (a.level < b.level) return false;
  const int shift = a.level - b.level;
  for (std::size_t i = 0; i < a.index.size(); ++i) {
    if ((b.index[i] >> shift) != a.index[i]) return false;
  }
  return true;
}

bool overlaps(const CubeId& a, const CubeId& b) { return contains(a, b) || contains(b, a); }

Lattice::Lattice(LatticeConfig config) : config_(std::move(config)) {
  const int n = config_.dimension;
  if (n < 1) throw std::invalid_argument("lattice dimension must be at least 1");
  if (config_.finest_level > 0) throw std::invalid_argument("finest_level must not exceed the root level 0");
  if (!config_.anchor.empty() && static_cast<int>(config_.anchor.size()) != n) {
    throw std::invalid_argument("anchor must have one coordinate per dimension");
  }
  const std::int64_t bits = static_cast<std::int64_t>(n) * depth();
  if (bits > 24) {
    throw std::invalid_argument("lattice has 2^" + std::to_string(bits) +
                                " finest cells; the cap is 2^24");
  }
  cell_count_ = std::int64_t{1} << bits;

  auto m2l = std::make_shared<std::vector<std::uint32_t>>(static_cast<std::size_t>(cell_count_));
  auto l2m = std::make_shared<std::vector<std::uint32_t>>(static_cast<std::size_t>(cell_count_));
  for (std::int64_t lin = 0; lin < cell_count_; ++lin) {
    const auto idx = cell_index(lin);
    const auto code = interleave(idx, depth(), n);
    (*l2m)[static_cast<std::size_t>(lin)] = static_cast<std::uint32_t>(code);
    (*m2l)[static_cast<std::size_t>(code)] = static_cast<std::uint32_t>(lin);
  }
  morton_to_linear_ = std::move(m2l);
  linear_to_morton_ = std::move(l2m);
}

double Lattice::cell_side() const { return std::ldexp(1.0, finest_level()); }

std::int64_t Lattice::cube_count() const {
  std::int64_t total = 0;
  for (int d = 0; d <= depth(); ++d) total += cubes_at_depth(d);
  return total;
}

CubeId Lattice::root() const { return CubeId{0, std::vector<std::int64_t>(static_cast<std::size_t>(dimension()), 0)}; }

bool Lattice::is_valid(const CubeId& cube) const {
  if (static_cast<int>(cube.index.size()) != dimension()) return false;
  if (cube.level > 0 || cube.level < finest_level()) return false;
  const std::int64_t limit = std::int64_t{1} << (-cube.level);
  return std::all_of(cube.index.begin(), cube.index.end(),
                     [&](std::int64_t i) { return i >= 0 && i < limit; });
}

void Lattice::validate(const CubeId& cube) const {
  if (!is_valid(cube)) throw std::invalid_argument("cube " + to_string(cube) + " is not inside the window");
}

CubeId Lattice::parent(const CubeId& cube) const {
  validate(cube);
  if (cube.level >= 0) throw std::invalid_argument("no parent in window");
  CubeId p{cube.level + 1, cube.index};
  for (auto& i : p.index) i >>= 1;
  return p;
}

std::vector<CubeId> Lattice::children(const CubeId& cube) const {
  validate(cube);
  if (cube.level <= finest_level()) throw std::invalid_argument("no children");
  std::vector<CubeId> out;
  out.reserve(static_cast<std::size_t>(children_per_cube()));
  for (int c = 0; c < children_per_cube(); ++c) {
    CubeId child{cube.level - 1, cube.index};
    for (int a = 0; a < dimension(); ++a) {
      child.index[static_cast<std::size_t>(a)] = 2 * cube.index[static_cast<std::size_t>(a)] + ((c >> a) & 1);
    }
    out.push_back(std::move(child));
  }
  return out;
}

std::int64_t Lattice::prefix(const CubeId& cube) const {
  validate(cube);
  return interleave(cube.index, -cube.level, dimension());
}

CubeId Lattice::cube_at(int d, std::int64_t p) const {
  if (d < 0 || d > depth() || p < 0 || p >= cubes_at_depth(d)) {
    throw std::out_of_range("cube address outside the window");
  }
  return CubeId{-d, deinterleave(p, d, dimension())};
}

GridSet Lattice::cells(const CubeId& cube) const {
  const std::int64_t p = prefix(cube);
  const std::int64_t span = cells_below(-cube.level);
  GridSet out(*this);
  out.fill_morton_range(p * span, (p + 1) * span);
  return out;
}

GridSet Lattice::triple(const CubeId& cube) const {
  validate(cube);
  const std::int64_t scale = std::int64_t{1} << (cube.level - finest_level());
  const std::int64_t m = cells_per_axis();
  std::vector<std::int64_t> lo(static_cast<std::size_t>(dimension()));
  std::vector<std::int64_t> hi(static_cast<std::size_t>(dimension()));
  for (std::size_t a = 0; a < lo.size(); ++a) {
    lo[a] = std::max<std::int64_t>(0, (cube.index[a] - 1) * scale);
    hi[a] = std::min<std::int64_t>(m, (cube.index[a] + 2) * scale);
  }
  GridSet out(*this);
  for_each_in_box(lo, hi, [&](const std::vector<std::int64_t>& idx) { out.insert(linear_index(idx)); });
  return out;
}

GridSet Lattice::ball_cells(const Ball& ball) const {
  if (static_cast<int>(ball.center.size()) != dimension()) {
    throw std::invalid_argument("ball center has the wrong dimension");
  }
  if (!(ball.radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
  const double h = cell_side();
  const std::int64_t m = cells_per_axis();
  std::vector<double> local(ball.center.size());
  std::vector<std::int64_t> lo(ball.center.size());
  std::vector<std::int64_t> hi(ball.center.size());
  for (std::size_t a = 0; a < local.size(); ++a) {
    const double origin = config_.anchor.empty() ? 0.0 : static_cast<double>(config_.anchor[a]);
    local[a] = ball.center[a] - origin;
    // cell i has center (i + 1/2) h; keep every i whose center can be within r.
    lo[a] = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((local[a] - ball.radius) / h - 0.5)), 0, m);
    hi[a] = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::ceil((local[a] + ball.radius) / h + 0.5)) + 1, 0, m);
  }
  const double r2 = ball.radius * ball.radius;
  GridSet out(*this);
  for_each_in_box(lo, hi, [&](const std::vector<std::int64_t>& idx) {
    double d2 = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      const double delta = (static_cast<double>(idx[a]) + 0.5) * h - local[a];
      d2 += delta * delta;
    }
    if (d2 < r2) out.insert(linear_index(idx));
  });
  return out;
}

BallCover Lattice::covering_cubes_for_ball(const Ball& ball) const {
  if (static_cast<int>(ball.center.size()) != dimension()) {
    throw std::invalid_argument("ball center has the wrong dimension");
  }
  if (!(ball.radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
  BallCover cover;
  const double diameter = 2.0 * ball.radius;
  int level = finest_level();
  while (level < 0 && std::ldexp(1.0, level) < diameter) ++level;
  cover.level = level;
  cover.clamped_to_root = std::ldexp(1.0, level) < diameter;
  cover.clamped_to_finest = level == finest_level() && std::ldexp(1.0, level - 1) >= diameter;

  const double side = std::ldexp(1.0, level);
  const std::int64_t limit = std::int64_t{1} << (-level);
  std::vector<double> local(ball.center.size());
  std::vector<std::int64_t> lo(ball.center.size());
  std::vector<std::int64_t> hi(ball.center.size());
  for (std::size_t a = 0; a < local.size(); ++a) {
    const double origin = config_.anchor.empty() ? 0.0 : static_cast<double>(config_.anchor[a]);
    local[a] = ball.center[a] - origin;
    lo[a] = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((local[a] - ball.radius) / side)) - 1, 0, limit);
    hi[a] = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((local[a] + ball.radius) / side)) + 2, 0, limit);
  }
  const double r2 = ball.radius * ball.radius;
  for_each_in_box(lo, hi, [&](const std::vector<std::int64_t>& idx) {
    // Distance from the center to the closed cube.
    double d2 = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      const double c0 = static_cast<double>(idx[a]) * side;
      const double c1 = c0 + side;
      const double delta = local[a] < c0 ? c0 - local[a] : (local[a] > c1 ? local[a] - c1 : 0.0);
      d2 += delta * delta;
    }
    if (d2 < r2) cover.cubes.push_back(CubeId{level, idx});
  });
  return cover;
}

std::vector<CubeId> Lattice::all_cubes() const {
  std::vector<CubeId> out;
  out.reserve(static_cast<std::size_t>(cube_count()));
  for (int d = 0; d <= depth(); ++d) {
    for (std::int64_t p = 0; p < cubes_at_depth(d); ++p) out.push_back(cube_at(d, p));
  }
  return out;
}

std::int64_t Lattice::linear_index(std::span<const std::int64_t> cell) const {
  if (static_cast<int>(cell.size()) != dimension()) throw std::invalid_argument("cell index has the wrong dimension");
  const std::int64_t m = cells_per_axis();
  std::int64_t lin = 0;
  for (std::size_t a = cell.size(); a-- > 0;) {
    if (cell[a] < 0 || cell[a] >= m) throw std::out_of_range("cell index outside the window");
    lin = lin * m + cell[a];
  }
  return lin;
}

std::vector<std::int64_t> Lattice::cell_index(std::int64_t linear) const {
  if (linear < 0 || linear >= cell_count_) throw std::out_of_range("cell outside the window");
  const std::int64_t m = cells_per_axis();
  std::vector<std::int64_t> idx(static_cast<std::size_t>(dimension()));
  for (auto& i : idx) {
    i = linear % m;
    linear /= m;
  }
  return idx;
}

std::vector<double> Lattice::cell_center(std::int64_t linear) const {
  const auto idx = cell_index(linear);
  const double h = cell_side();
  std::vector<double> c(idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a) {
    const double origin = config_.anchor.empty() ? 0.0 : static_cast<double>(config_.anchor[a]);
    c[a] = origin + (static_cast<double>(idx[a]) + 0.5) * h;
  }
  return c;
}

CubeId Lattice::smallest_cube_containing(const GridSet& set) const {
  if (set.empty()) return root();
  const std::int64_t lo = set.first_morton();
  const std::int64_t hi = set.last_morton();
  int d = depth();
  while (d > 0 && (lo >> (dimension() * (depth() - d))) != (hi >> (dimension() * (depth() - d)))) --d;
  return cube_at(d, lo >> (dimension() * (depth() - d)));
}

CubeField::CubeField(const Lattice& lattice, double fill) : dimension_(lattice.dimension()) {
  values_.resize(static_cast<std::size_t>(lattice.depth() + 1));
  for (int d = 0; d <= lattice.depth(); ++d) {
    values_[static_cast<std::size_t>(d)].assign(static_cast<std::size_t>(lattice.cubes_at_depth(d)), fill);
  }
}

CubeField CubeField::uniform_per_depth(const Lattice& lattice, std::vector<double> per_depth) {
  if (static_cast<int>(per_depth.size()) != lattice.depth() + 1) {
    throw std::invalid_argument("uniform_per_depth: one value per depth required");
  }
  CubeField field;
  field.dimension_ = lattice.dimension();
  for (double v : per_depth) field.values_.push_back({v});
  return field;
}

void CubeField::set(int d, std::int64_t p, double value) {
  auto& row = values_[static_cast<std::size_t>(d)];
  const std::size_t full = std::size_t{1} << (dimension_ * d);
  if (row.size() != full) row.assign(full, row.front());
  row[static_cast<std::size_t>(p)] = value;
}

}  // namespace dyadic
