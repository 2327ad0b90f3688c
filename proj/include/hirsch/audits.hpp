#pragma once

#include <string>
#include <vector>

#include "hirsch/foliation.hpp"
#include "hirsch/pants_geometry.hpp"

namespace hirsch {

struct AuditResult {
  std::string check;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// Checks of the fixed collar and smoothing models; shape independent.
// Curvature and harmonicity of the collar chart, circle lengths against
// the closed form, flattening of the cone model, and the 4 pi cone angle.
std::vector<AuditResult> run_collar_audits();

// Geometry checks of one pants shape. grid sets the cells per unit length
// of the area and Gauss-Bonnet quadratures; the Laplace stencil always
// runs at spacings 1/32 and 1/64 to expose its convergence order.
std::vector<AuditResult> run_shape_audits(const PantsShape& shape, int grid);

// Fiberwise checks of a whole family: branch-weight unit sums on the
// dyadic grid of grid_level, the deck-map symmetry of shapes and
// crossings, and fiber mass quadrature against its closed form.
std::vector<AuditResult> run_family_audits(const MetricFamily& family,
                                           int grid_level);

bool all_pass(const std::vector<AuditResult>& results);

}  // namespace hirsch
