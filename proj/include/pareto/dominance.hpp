#pragma once

#include "pareto/types.hpp"

#include <vector>

namespace pareto {

// ============================================================================
// Dominance relations (minimization in all objectives)
// ============================================================================

/// Weak dominance: a <= b coordinatewise. Reflexive.
[[nodiscard]] bool dominates_weak(const Vector& a, const Vector& b);

/// Strong dominance: a < b coordinatewise. Irreflexive.
[[nodiscard]] bool dominates_strong(const Vector& a, const Vector& b);

/// Validates a point set for dominance work: M >= 2, all coordinates finite.
void validate_point_set(const PointSet& s, const char* where);

/// Keeps exactly the rows not weakly dominated by any distinct row value.
/// Exact duplicates of a retained point are all retained; input order is kept.
[[nodiscard]] PointSet non_dominated_filter(const PointSet& s);

/// Indices (into s) retained by non_dominated_filter, in input order.
[[nodiscard]] std::vector<int> non_dominated_indices(const PointSet& s);

// ============================================================================
// Staircase (single-run attainment) frontier
// ============================================================================

/// Conservative frontier estimate over a finite point set: the axis-aligned
/// boundary of the region strongly dominated by the set. Its score is the
/// signed Chebyshev distance to that boundary (positive inside the dominated
/// region), so it plugs into the same level-set and audit machinery as the
/// smooth surrogates.
class StaircaseFrontier {
public:
    /// Builds from a non-empty point set; keeps the non-dominated subset.
    explicit StaircaseFrontier(const PointSet& s);

    /// Signed Chebyshev distance: max over retained points p of min_i(y_i - p_i).
    [[nodiscard]] Scalar value(const Vector& y) const;

    [[nodiscard]] const PointSet& points() const { return points_; }
    [[nodiscard]] int dim() const { return static_cast<int>(points_.cols()); }

    [[nodiscard]] ScoreFunction score_function() const;

    /// M == 2 only: the staircase polyline through the non-dominated points,
    /// vertices in lexicographic order of the sorted points with the corner
    /// (q1, p2) inserted between consecutive points p, q.
    [[nodiscard]] std::vector<Vector> polyline() const;

private:
    PointSet points_;  // non-dominated subset, input order
};

/// Maps sign(f(y)) to the frontier classification: > zero_tol dominated,
/// < -zero_tol nondominated, |f| <= zero_tol frontier.
[[nodiscard]] FrontierClass classify_against_frontier(const ScoreFunction& f, const Vector& y,
                                                      Scalar zero_tol = 1e-9);

}  // namespace pareto
