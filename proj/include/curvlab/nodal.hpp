#pragma once

#include "curvlab/grid.hpp"

namespace curvlab {

struct NodalSet {
  /// Zero-contour polylines in (s, t) grid coordinates and mapped chart points.
  std::vector<std::vector<std::pair<double, double>>> polylines_st;
  std::vector<std::vector<ChartPoint>> polylines;
  int boundary_zero_count = 0;
  /// Cell centers (s, t) where four edge crossings meet: transversal
  /// self-intersections of the nodal set at grid resolution.
  std::vector<std::pair<double, double>> crossings;
};

/// Marching-squares trace of the zero set of a grid field. scale_hint sets
/// the reference magnitude for the IdenticallyZero test (defaults to the
/// field's own sup when <= 0).
NodalSet trace_nodal_set(const ScalarField& field, double scale_hint = 0.0);

}  // namespace curvlab
