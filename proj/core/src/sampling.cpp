#include "dyadic/sampling.hpp"

#include <algorithm>

namespace dyadic {

GridSet random_set(const Lattice& lattice, Rng& rng, double density) {
  GridSet s(lattice);
  for (std::int64_t m = 0; m < lattice.cell_count(); ++m) {
    if (rng.bernoulli(density)) s.set_morton(m, true);
  }
  return s;
}

GridSet random_set(const Lattice& lattice, Rng& rng) {
  const double density = rng.uniform();
  return random_set(lattice, rng, density);
}

CubeId random_cube(const Lattice& lattice, Rng& rng) {
  const int d = static_cast<int>(rng.below(static_cast<std::uint64_t>(lattice.depth() + 1)));
  const auto p = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(lattice.cubes_at_depth(d))));
  return lattice.cube_at(d, p);
}

GridSet random_cube_union(const Lattice& lattice, Rng& rng, int cubes) {
  GridSet s(lattice);
  for (int i = 0; i < cubes; ++i) s |= lattice.cells(random_cube(lattice, rng));
  return s;
}

std::vector<CubeId> random_family(const Lattice& lattice, Rng& rng, int attempts) {
  GridSet used(lattice);
  std::vector<CubeId> out;
  for (int i = 0; i < attempts; ++i) {
    const CubeId c = random_cube(lattice, rng);
    const std::int64_t span = lattice.cells_below(-c.level);
    const std::int64_t begin = lattice.prefix(c) * span;
    if (used.any_in_morton_range(begin, begin + span)) continue;
    used.fill_morton_range(begin, begin + span);
    out.push_back(c);
  }
  return out;
}

GridFunction random_step_function(const Lattice& lattice, Rng& rng, int levels, double scale) {
  const int d = static_cast<int>(rng.below(static_cast<std::uint64_t>(lattice.depth() + 1)));
  const std::int64_t span = lattice.cells_below(d);
  GridFunction f(lattice);
  for (std::int64_t p = 0; p < lattice.cubes_at_depth(d); ++p) {
    const double v = static_cast<double>(rng.below(static_cast<std::uint64_t>(std::max(levels, 1)))) * scale;
    for (std::int64_t m = p * span; m < (p + 1) * span; ++m) f.set(lattice.to_linear(m), v);
  }
  return f;
}

GridFunction random_function(const Lattice& lattice, Rng& rng, double hi) {
  GridFunction f(lattice);
  for (std::int64_t c = 0; c < lattice.cell_count(); ++c) f.set(c, rng.uniform(0.0, hi));
  return f;
}

}  // namespace dyadic
