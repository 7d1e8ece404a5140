#pragma once

// Sets and step functions on the finest cells of a window lattice. Public
// accessors take linear cell indices; storage is in Morton order so that
// every cube is a contiguous range.

#include <cstdint>
#include <span>
#include <vector>

#include "dyadic/lattice.hpp"

namespace dyadic {

class GridSet {
 public:
  explicit GridSet(Lattice lattice);
  static GridSet full(Lattice lattice);
  static GridSet from_cells(Lattice lattice, std::span<const std::int64_t> linear_cells);

  const Lattice& lattice() const { return lattice_; }

  bool contains(std::int64_t linear) const { return test_morton(lattice_.to_morton(linear)); }
  void insert(std::int64_t linear) { set_morton(lattice_.to_morton(linear), true); }
  void erase(std::int64_t linear) { set_morton(lattice_.to_morton(linear), false); }

  bool test_morton(std::int64_t m) const {
    return (words_[static_cast<std::size_t>(m >> 6)] >> (m & 63)) & 1U;
  }
  void set_morton(std::int64_t m, bool member);
  // Marks every cell of the Morton range [begin, end).
  void fill_morton_range(std::int64_t begin, std::int64_t end);
  bool any_in_morton_range(std::int64_t begin, std::int64_t end) const;
  bool all_in_morton_range(std::int64_t begin, std::int64_t end) const;

  bool empty() const;
  std::int64_t count() const;
  // Member cells as sorted linear indices.
  std::vector<std::int64_t> cells() const;
  std::int64_t first_morton() const;
  std::int64_t last_morton() const;

  bool is_subset_of(const GridSet& other) const;
  GridSet& operator|=(const GridSet& other);
  GridSet& operator&=(const GridSet& other);
  GridSet& operator-=(const GridSet& other);
  friend GridSet operator|(GridSet a, const GridSet& b) { return a |= b; }
  friend GridSet operator&(GridSet a, const GridSet& b) { return a &= b; }
  friend GridSet operator-(GridSet a, const GridSet& b) { return a -= b; }
  GridSet complement() const;

  std::span<const std::uint64_t> words() const { return words_; }

  friend bool operator==(const GridSet& a, const GridSet& b) {
    return a.lattice_ == b.lattice_ && a.words_ == b.words_;
  }

 private:
  void require_same_lattice(const GridSet& other) const;
  void trim();

  Lattice lattice_;
  std::vector<std::uint64_t> words_;
};

// One extended-real value per finest cell. Values may be signed; the
// integration entry points require nonnegative input and say so.
class GridFunction {
 public:
  explicit GridFunction(Lattice lattice, double fill = 0.0);
  static GridFunction from_linear(Lattice lattice, std::span<const double> linear_values);
  static GridFunction indicator(const GridSet& set, double height = 1.0);

  const Lattice& lattice() const { return lattice_; }

  double at(std::int64_t linear) const { return values_[static_cast<std::size_t>(lattice_.to_morton(linear))]; }
  void set(std::int64_t linear, double value);
  double at_morton(std::int64_t m) const { return values_[static_cast<std::size_t>(m)]; }
  std::span<const double> morton_values() const { return values_; }
  std::vector<double> linear_values() const;

  double max() const;
  double min() const;
  bool is_nonnegative() const;

  GridFunction abs() const;
  // f - c, cellwise.
  GridFunction minus(double c) const;
  GridFunction scaled(double c) const;
  GridFunction pow(double p) const;
  GridFunction& operator+=(const GridFunction& other);
  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }

  // {x : f(x) > t} and {x : f(x) >= t}.
  GridSet superlevel(double t) const;
  GridSet superlevel_closed(double t) const;

  friend bool operator==(const GridFunction&, const GridFunction&) = default;

 private:
  Lattice lattice_;
  std::vector<double> values_;
};

}  // namespace dyadic
