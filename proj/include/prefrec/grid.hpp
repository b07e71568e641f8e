#pragma once

#include <cstdint>
#include <vector>

#include "prefrec/geometry.hpp"

namespace prefrec {

// Finite sample of an alternative space; the implicit pair set points x points
// is what the graph metrics operate on.
struct EvaluationGrid {
    AlternativeSpace space;
    std::vector<Point> points;

    std::size_t size() const { return points.size(); }
};

EvaluationGrid make_grid(AlternativeSpace space, std::vector<Point> points);

// Composition lattice on the simplex; points_per_dim values along each edge
// (denominator points_per_dim - 1). interior keeps strictly positive points only.
EvaluationGrid simplex_grid(std::size_t d, std::size_t points_per_dim, bool interior = false);

// Uniform lattice with per_dim points per coordinate over the space's support box.
EvaluationGrid box_grid(const AlternativeSpace& space, std::size_t per_dim);

EvaluationGrid line_grid(double lo, double hi, std::size_t count);

// Max distance from the space (restricted to the grid's hull) to the nearest
// grid point, estimated on a refined probe lattice. The product-space (pair)
// covering radius is sqrt(2) times this.
double covering_radius_estimate(const EvaluationGrid& grid, std::size_t refinement = 4);

std::uint64_t grid_fingerprint(const EvaluationGrid& grid);

}  // namespace prefrec
