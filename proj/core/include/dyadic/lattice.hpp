#pragma once

// Half-open dyadic cubes inside a finite window [0,1)^n (shifted by an
// integer anchor). Cubes are addressed by (level, index vector); level 0 is
// the window root and cells at `finest_level` are the smallest cubes.
//
// Internally every cube at depth d = -level is also addressed by its Morton
// prefix: the bit-interleaving of its index vector. The descendants of a
// cube then occupy one contiguous range of finest-level Morton codes, which
// the tree algorithms rely on.

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace dyadic {

class GridSet;

// Configurations with more finest cells than this are rejected.
inline constexpr std::int64_t kMaxCells = std::int64_t{1} << 24;

struct LatticeConfig {
  int dimension = 1;
  int finest_level = -1;
  // Origin of the root cube; empty means the zero vector.
  std::vector<std::int64_t> anchor;

  friend bool operator==(const LatticeConfig&, const LatticeConfig&) = default;
};

struct CubeId {
  int level = 0;
  std::vector<std::int64_t> index;

  friend auto operator<=>(const CubeId&, const CubeId&) = default;
  friend bool operator==(const CubeId&, const CubeId&) = default;
};

std::string to_string(const CubeId& cube);

// True iff cube b is a subset of cube a.
bool contains(const CubeId& a, const CubeId& b);

// Exactly one of {disjoint, a ⊆ b, b ⊆ a} holds for dyadic cubes.
bool overlaps(const CubeId& a, const CubeId& b);

struct Ball {
  std::vector<double> center;
  double radius = 0.0;

  friend bool operator==(const Ball&, const Ball&) = default;
};

struct BallCover {
  int level = 0;
  std::vector<CubeId> cubes;
  // Set when 2r exceeds the root side and the root level was used instead.
  bool clamped_to_root = false;
  // Set when 2r is below the finest side; the finest level was used.
  bool clamped_to_finest = false;
};

class Lattice {
 public:
  explicit Lattice(LatticeConfig config);
  Lattice(int dimension, int finest_level) : Lattice(LatticeConfig{dimension, finest_level, {}}) {}

  const LatticeConfig& config() const { return config_; }
  int dimension() const { return config_.dimension; }
  int finest_level() const { return config_.finest_level; }
  // Number of levels below the root.
  int depth() const { return -config_.finest_level; }
  std::int64_t cells_per_axis() const { return std::int64_t{1} << depth(); }
  std::int64_t cell_count() const { return cell_count_; }
  double cell_side() const;
  // Total number of cubes in the window lattice.
  std::int64_t cube_count() const;

  CubeId root() const;
  bool is_valid(const CubeId& cube) const;
  // Throws std::invalid_argument when the cube is not a window cube.
  void validate(const CubeId& cube) const;

  CubeId parent(const CubeId& cube) const;
  std::vector<CubeId> children(const CubeId& cube) const;
  GridSet cells(const CubeId& cube) const;
  // Finest cells of the concentric cube with three times the side, clipped
  // to the window.
  GridSet triple(const CubeId& cube) const;
  // Finest cells whose center lies strictly inside the open ball.
  GridSet ball_cells(const Ball& ball) const;
  BallCover covering_cubes_for_ball(const Ball& ball) const;

  // Every cube of the window, root first, then depth by depth in Morton order.
  std::vector<CubeId> all_cubes() const;

  // Cell addressing. Linear order runs the first axis fastest.
  std::int64_t linear_index(std::span<const std::int64_t> cell_index) const;
  std::vector<std::int64_t> cell_index(std::int64_t linear) const;
  std::vector<double> cell_center(std::int64_t linear) const;
  std::int64_t to_morton(std::int64_t linear) const { return (*linear_to_morton_)[static_cast<std::size_t>(linear)]; }
  std::int64_t to_linear(std::int64_t morton) const { return (*morton_to_linear_)[static_cast<std::size_t>(morton)]; }

  // Depth/prefix addressing of cubes.
  std::int64_t cubes_at_depth(int depth) const { return std::int64_t{1} << (dimension() * depth); }
  std::int64_t cells_below(int depth) const { return std::int64_t{1} << (dimension() * (this->depth() - depth)); }
  int children_per_cube() const { return 1 << dimension(); }
  std::int64_t prefix(const CubeId& cube) const;
  CubeId cube_at(int depth, std::int64_t prefix) const;
  // Smallest cube containing every member; root for an empty set.
  CubeId smallest_cube_containing(const GridSet& set) const;

  friend bool operator==(const Lattice& a, const Lattice& b) { return a.config_ == b.config_; }

 private:
  LatticeConfig config_;
  std::int64_t cell_count_ = 0;
  std::shared_ptr<const std::vector<std::uint32_t>> morton_to_linear_;
  std::shared_ptr<const std::vector<std::uint32_t>> linear_to_morton_;
};

// One value per window cube, stored by depth and Morton prefix. A depth may
// hold a single shared value (translation-invariant data).
class CubeField {
 public:
  CubeField() = default;
  CubeField(const Lattice& lattice, double fill);
  static CubeField uniform_per_depth(const Lattice& lattice, std::vector<double> per_depth);

  int depth() const { return static_cast<int>(values_.size()) - 1; }
  double at(int depth, std::int64_t prefix) const {
    const auto& row = values_[static_cast<std::size_t>(depth)];
    return row.size() == 1 ? row.front() : row[static_cast<std::size_t>(prefix)];
  }
  // Expands a uniform depth into a full row on first write.
  void set(int depth, std::int64_t prefix, double value);
  std::span<const double> row(int depth) const { return values_[static_cast<std::size_t>(depth)]; }
  bool is_uniform(int depth) const { return values_[static_cast<std::size_t>(depth)].size() == 1; }

 private:
  int dimension_ = 1;
  std::vector<std::vector<double>> values_;
};

}  // namespace dyadic
