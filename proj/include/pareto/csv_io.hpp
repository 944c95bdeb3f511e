#pragma once

#include "pareto/conditions.hpp"
#include "pareto/levelset.hpp"
#include "pareto/types.hpp"

#include <string>

namespace pareto {

/// 17-significant-digit float formatting shared by every CSV/JSON artifact.
std::string format_float(Scalar x);

// Point sets: one row per point, header y1,...,yM.
void write_point_set_csv(const PointSet& s, const std::string& path);
PointSet read_point_set_csv(const std::string& path);

// Frontier polylines: header component,vertex_index,y1,y2.
void write_frontier_csv(const FrontierEstimate& e, const std::string& path);
FrontierEstimate read_frontier_csv(const std::string& path);

// Score values over a full grid, row-major: header y1,y2,f.
void write_contour_grid_csv(const Box& box, int nx, int ny, const Matrix& values,
                            const std::string& path);

// Audit summary rows: point, direction, delta, f+, f-, pass.
void write_validity_csv(const ValidityReport& report, const std::string& path);

}  // namespace pareto
