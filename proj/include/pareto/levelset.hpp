#pragma once

#include "pareto/types.hpp"

#include <string>
#include <vector>

namespace pareto {

// ============================================================================
// 2D zero level-set extraction (marching squares + bisection refinement)
// ============================================================================

/// Extracted zero level set: one or more polylines with grid metadata.
/// Closed contours repeat their first vertex at the end.
struct FrontierEstimate {
    std::vector<std::vector<Vector>> polylines;
    Box bounding_box;
    int nx = 0;  // cells per axis
    int ny = 0;
    int component_count = 0;
    int saddle_cells = 0;
    std::string diagnostic;

    [[nodiscard]] bool empty() const { return polylines.empty(); }
    [[nodiscard]] int vertex_count() const {
        int n = 0;
        for (const auto& p : polylines) n += static_cast<int>(p.size());
        return n;
    }
    [[nodiscard]] Scalar cell_diagonal() const;

    /// All vertices as a point set (rows).
    [[nodiscard]] PointSet vertices() const;
};

/// Marching squares over an (nx x ny)-cell grid; every sign-change edge is
/// refined by bisection until |f| <= refine_tol. Saddle cells are resolved by
/// the cell-center sign. Deterministic. A constant-signed f yields an empty
/// estimate with a diagnostic.
FrontierEstimate extract_zero_set(const ScoreFunction& f, const Box& box, int nx, int ny,
                                  Scalar refine_tol = 1e-8, int max_bisect = 60);

/// True iff the estimate is a single connected component.
[[nodiscard]] bool connectivity(const FrontierEstimate& e);

/// Polyline vertices plus points sampled along each segment at most `step` apart.
[[nodiscard]] std::vector<Vector> densify(const FrontierEstimate& e, Scalar step);

/// Restricts the polylines to an axis-aligned box, splitting them where they
/// cross the border. Used to compare a frontier against reference samples over
/// the region the samples actually span.
[[nodiscard]] FrontierEstimate clip_to_box(const FrontierEstimate& e, const Box& box);

/// Symmetric Hausdorff distance between densified polylines / point sets.
/// Polylines are densified with step <= their grid cell diagonal / 4.
[[nodiscard]] Scalar hausdorff(const FrontierEstimate& a, const FrontierEstimate& b);
[[nodiscard]] Scalar hausdorff(const FrontierEstimate& a, const PointSet& b);
[[nodiscard]] Scalar hausdorff(const PointSet& a, const FrontierEstimate& b);
[[nodiscard]] Scalar hausdorff(const PointSet& a, const PointSet& b);

/// Largest coordinatewise slack min_i(q_i - p_i) over vertex pairs where p
/// strongly dominates q; zero for a frontier free of strong dominance.
struct DepthResult {
    Scalar depth = 0.0;
    Vector witness_p;
    Vector witness_q;
};
[[nodiscard]] DepthResult dominance_violation_depth(const FrontierEstimate& e);

}  // namespace pareto
