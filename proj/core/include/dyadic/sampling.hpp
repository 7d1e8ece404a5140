#pragma once

// Seeded generators for random grid sets, cube families and step functions.

#include <vector>

#include "dyadic/grid.hpp"
#include "dyadic/lattice.hpp"
#include "dyadic/random.hpp"

namespace dyadic {

// Each cell joins independently with the given probability.
GridSet random_set(const Lattice& lattice, Rng& rng, double density);
// Density itself drawn uniformly, so sparse and dense sets both appear.
GridSet random_set(const Lattice& lattice, Rng& rng);

CubeId random_cube(const Lattice& lattice, Rng& rng);
GridSet random_cube_union(const Lattice& lattice, Rng& rng, int cubes);

// Pairwise disjoint cubes, at most `attempts` of them.
std::vector<CubeId> random_family(const Lattice& lattice, Rng& rng, int attempts);

// Constant on the cubes of a random depth, values drawn from {0, 1, ..., levels - 1} * scale.
GridFunction random_step_function(const Lattice& lattice, Rng& rng, int levels = 6, double scale = 1.0);

// Uniform values in [0, hi) per cell.
GridFunction random_function(const Lattice& lattice, Rng& rng, double hi = 1.0);

}  // namespace dyadic
