#include "pareto/dominance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pareto {

bool dominates_weak(const Vector& a, const Vector& b) {
    require_same_dim(a, b, "dominates_weak");
    return (a.array() <= b.array()).all();
}

bool dominates_strong(const Vector& a, const Vector& b) {
    require_same_dim(a, b, "dominates_strong");
    return (a.array() < b.array()).all();
}

void validate_point_set(const PointSet& s, const char* where) {
    if (s.rows() > 0 && s.cols() < 2)
        throw std::invalid_argument(std::string(where) + ": objective dimension must be >= 2");
    require_finite(s, where);
}

std::vector<int> non_dominated_indices(const PointSet& s) {
    validate_point_set(s, "non_dominated_filter");
    const int n = static_cast<int>(s.rows());
    std::vector<int> keep;
    for (int i = 0; i < n; ++i) {
        bool dominated = false;
        for (int j = 0; j < n && !dominated; ++j) {
            if (j == i) continue;
            // A distinct member means a different value; exact duplicates are
            // mutually retained.
            if (s.row(j) != s.row(i) && (s.row(j).array() <= s.row(i).array()).all())
                dominated = true;
        }
        if (!dominated) keep.push_back(i);
    }
    return keep;
}

PointSet non_dominated_filter(const PointSet& s) {
    const std::vector<int> keep = non_dominated_indices(s);
    PointSet out(static_cast<int>(keep.size()), s.cols());
    for (int k = 0; k < static_cast<int>(keep.size()); ++k) out.row(k) = s.row(keep[k]);
    return out;
}

StaircaseFrontier::StaircaseFrontier(const PointSet& s) {
    if (s.rows() == 0) throw std::invalid_argument("StaircaseFrontier: empty point set");
    validate_point_set(s, "StaircaseFrontier");
    points_ = non_dominated_filter(s);
}

Scalar StaircaseFrontier::value(const Vector& y) const {
    if (y.size() != points_.cols())
        throw std::invalid_argument("StaircaseFrontier::value: dimension mismatch");
    // Signed L-inf distance to the boundary of the union of open up-orthants
    // {y : y > p coordinatewise}: exact for this geometry.
    Scalar best = -std::numeric_limits<Scalar>::infinity();
    for (int i = 0; i < points_.rows(); ++i)
        best = std::max(best, (y.transpose() - points_.row(i)).minCoeff());
    return best;
}

ScoreFunction StaircaseFrontier::score_function() const {
    ScoreFunction f;
    f.dim = dim();
    StaircaseFrontier self = *this;
    f.value = [self](const Vector& y) { return self.value(y); };
    return f;
}

std::vector<Vector> StaircaseFrontier::polyline() const {
    if (dim() != 2)
        throw std::invalid_argument("StaircaseFrontier::polyline: requires M == 2");
    std::vector<Vector> pts;
    pts.reserve(static_cast<size_t>(points_.rows()));
    for (int i = 0; i < points_.rows(); ++i) pts.push_back(points_.row(i).transpose());
    std::sort(pts.begin(), pts.end(), [](const Vector& a, const Vector& b) {
        return a(0) != b(0) ? a(0) < b(0) : a(1) < b(1);
    });
    std::vector<Vector> line;
    for (size_t i = 0; i < pts.size(); ++i) {
        if (i > 0 && pts[i] != pts[i - 1]) {
            Vector corner(2);
            corner << pts[i](0), pts[i - 1](1);
            line.push_back(corner);
        }
        if (i == 0 || pts[i] != pts[i - 1]) line.push_back(pts[i]);
    }
    return line;
}

FrontierClass classify_against_frontier(const ScoreFunction& f, const Vector& y, Scalar zero_tol) {
    const Scalar v = f.value(y);
    if (!std::isfinite(v))
        throw std::runtime_error("classify_against_frontier: score function returned non-finite value");
    if (std::abs(v) <= zero_tol) return FrontierClass::frontier;
    return v > 0 ? FrontierClass::dominated : FrontierClass::nondominated;
}

}  // namespace pareto
