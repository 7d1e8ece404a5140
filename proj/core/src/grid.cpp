#include "dyadic/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "dyadic/extended.hpp"

namespace dyadic {
namespace {

std::size_t word_count(std::int64_t cells) { return static_cast<std::size_t>((cells + 63) / 64); }

}  // namespace

GridSet::GridSet(Lattice lattice) : lattice_(std::move(lattice)), words_(word_count(lattice_.cell_count()), 0) {}

GridSet GridSet::full(Lattice lattice) {
  GridSet s(std::move(lattice));
  s.fill_morton_range(0, s.lattice_.cell_count());
  return s;
}

GridSet GridSet::from_cells(Lattice lattice, std::span<const std::int64_t> linear_cells) {
  GridSet s(std::move(lattice));
  for (std::int64_t c : linear_cells) {
    if (c < 0 || c >= s.lattice_.cell_count()) {
      throw std::out_of_range("cell " + std::to_string(c) + " outside the window");
    }
    s.insert(c);
  }
  return s;
}

void GridSet::set_morton(std::int64_t m, bool member) {
  auto& w = words_[static_cast<std::size_t>(m >> 6)];
  const std::uint64_t bit = std::uint64_t{1} << (m & 63);
  w = member ? (w | bit) : (w & ~bit);
}

void GridSet::fill_morton_range(std::int64_t begin, std::int64_t end) {
  for (std::int64_t m = begin; m < end;) {
    if ((m & 63) == 0 && end - m >= 64) {
      words_[static_cast<std::size_t>(m >> 6)] = ~std::uint64_t{0};
      m += 64;
    } else {
      set_morton(m, true);
      ++m;
    }
  }
}

bool GridSet::any_in_morton_range(std::int64_t begin, std::int64_t end) const {
  for (std::int64_t m = begin; m < end;) {
    if ((m & 63) == 0 && end - m >= 64) {
      if (words_[static_cast<std::size_t>(m >> 6)] != 0) return true;
      m += 64;
    } else {
      if (test_morton(m)) return true;
      ++m;
    }
  }
  return false;
}

bool GridSet::all_in_morton_range(std::int64_t begin, std::int64_t end) const {
  for (std::int64_t m = begin; m < end;) {
    if ((m & 63) == 0 && end - m >= 64) {
      if (words_[static_cast<std::size_t>(m >> 6)] != ~std::uint64_t{0}) return false;
      m += 64;
    } else {
      if (!test_morton(m)) return false;
      ++m;
    }
  }
  return true;
}

bool GridSet::empty() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::int64_t GridSet::count() const {
  std::int64_t total = 0;
  for (auto w : words_) total += std::popcount(w);
  return total;
}

std::vector<std::int64_t> GridSet::cells() const {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(count()));
  for (std::size_t wi = 0; wi < words_.size(); ++wi) {
    std::uint64_t w = words_[wi];
    while (w) {
      const int b = std::countr_zero(w);
      out.push_back(lattice_.to_linear(static_cast<std::int64_t>(wi * 64 + static_cast<std::size_t>(b))));
      w &= w - 1;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t GridSet::first_morton() const {
  for (std::size_t wi = 0; wi < words_.size(); ++wi) {
    if (words_[wi]) return static_cast<std::int64_t>(wi * 64) + std::countr_zero(words_[wi]);
  }
  return -1;
}

std::int64_t GridSet::last_morton() const {
  for (std::size_t wi = words_.size(); wi-- > 0;) {
    if (words_[wi]) return static_cast<std::int64_t>(wi * 64) + 63 - std::countl_zero(words_[wi]);
  }
  return -1;
}

void GridSet::require_same_lattice(const GridSet& other) const {
  if (!(lattice_ == other.lattice_)) throw std::invalid_argument("grid sets live on different lattices");
}

void GridSet::trim() {
  const auto rem = lattice_.cell_count() & 63;
  if (rem != 0) words_.back() &= (std::uint64_t{1} << rem) - 1;
}

bool GridSet::is_subset_of(const GridSet& other) const {
  require_same_lattice(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & ~other.words_[i]) return false;
  }
  return true;
}

GridSet& GridSet::operator|=(const GridSet& other) {
  require_same_lattice(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

GridSet& GridSet::operator&=(const GridSet& other) {
  require_same_lattice(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

GridSet& GridSet::operator-=(const GridSet& other) {
  require_same_lattice(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

GridSet GridSet::complement() const {
  GridSet out = *this;
  for (auto& w : out.words_) w = ~w;
  out.trim();
  return out;
}

GridFunction::GridFunction(Lattice lattice, double fill)
    : lattice_(std::move(lattice)), values_(static_cast<std::size_t>(lattice_.cell_count()), fill) {
  require_not_nan(fill, "grid function");
}

GridFunction GridFunction::from_linear(Lattice lattice, std::span<const double> linear_values) {
  GridFunction f(std::move(lattice));
  if (static_cast<std::int64_t>(linear_values.size()) != f.lattice_.cell_count()) {
    throw std::invalid_argument("grid function needs " + std::to_string(f.lattice_.cell_count()) +
                                " values, got " + std::to_string(linear_values.size()));
  }
  for (std::size_t i = 0; i < linear_values.size(); ++i) f.set(static_cast<std::int64_t>(i), linear_values[i]);
  return f;
}

GridFunction GridFunction::indicator(const GridSet& set, double height) {
  GridFunction f(set.lattice());
  for (std::int64_t m = 0; m < set.lattice().cell_count(); ++m) {
    if (set.test_morton(m)) f.values_[static_cast<std::size_t>(m)] = height;
  }
  return f;
}

void GridFunction::set(std::int64_t linear, double value) {
  require_not_nan(value, "grid function");
  if (value == -kInfinity) throw std::invalid_argument("grid function: -inf is not admissible");
  values_[static_cast<std::size_t>(lattice_.to_morton(linear))] = value;
}

std::vector<double> GridFunction::linear_values() const {
  std::vector<double> out(values_.size());
  for (std::size_t m = 0; m < values_.size(); ++m) {
    out[static_cast<std::size_t>(lattice_.to_linear(static_cast<std::int64_t>(m)))] = values_[m];
  }
  return out;
}

double GridFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }
double GridFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }

bool GridFunction::is_nonnegative() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0; });
}

GridFunction GridFunction::abs() const {
  GridFunction out = *this;
  for (auto& v : out.values_) v = std::fabs(v);
  return out;
}

GridFunction GridFunction::minus(double c) const {
  require_not_nan(c, "shift");
  GridFunction out = *this;
  for (auto& v : out.values_) v = is_infinite(v) ? v : v - c;
  return out;
}

GridFunction GridFunction::scaled(double c) const {
  require_not_nan(c, "scale");
  GridFunction out = *this;
  for (auto& v : out.values_) v = saturating_mul(v, c);
  return out;
}

GridFunction GridFunction::pow(double p) const {
  GridFunction out = *this;
  for (auto& v : out.values_) v = std::pow(std::fabs(v), p);
  return out;
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  if (!(lattice_ == other.lattice_)) throw std::invalid_argument("grid functions live on different lattices");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

GridSet GridFunction::superlevel(double t) const {
  GridSet s(lattice_);
  for (std::size_t m = 0; m < values_.size(); ++m) {
    if (values_[m] > t) s.set_morton(static_cast<std::int64_t>(m), true);
  }
  return s;
}

GridSet GridFunction::superlevel_closed(double t) const {
  GridSet s(lattice_);
  for (std::size_t m = 0; m < values_.size(); ++m) {
    if (values_[m] >= t) s.set_morton(static_cast<std::int64_t>(m), true);
  }
  return s;
}

}  // namespace dyadic
