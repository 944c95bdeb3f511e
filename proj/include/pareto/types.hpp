#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>

namespace pareto {

using Scalar = double;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A point y in the M-dimensional objective space.
using ObjectivePoint = Vector;

/// A set of objective points, one per row (N x M).
using PointSet = Matrix;

/// Axis-aligned box in objective space.
struct Box {
    Vector lo;
    Vector hi;

    [[nodiscard]] int dim() const { return static_cast<int>(lo.size()); }
    [[nodiscard]] Vector extent() const { return hi - lo; }
    [[nodiscard]] bool contains(const Vector& y) const {
        return (y.array() >= lo.array()).all() && (y.array() <= hi.array()).all();
    }
};

/// A score function over the objective space: f(y) with optional gradient.
/// Realized by the fitted GPs, the SVM baseline, the staircase model, or a
/// user closure. Sign convention: f > 0 on the dominated set, f < 0 on the
/// non-dominated set, f = 0 on the frontier.
struct ScoreFunction {
    int dim = 0;
    std::function<Scalar(const Vector&)> value;
    std::function<Vector(const Vector&)> gradient;  // may be empty

    [[nodiscard]] bool has_gradient() const { return static_cast<bool>(gradient); }
    Scalar operator()(const Vector& y) const { return value(y); }
};

enum class FrontierClass { dominated, nondominated, frontier };

inline const char* to_string(FrontierClass c) {
    switch (c) {
        case FrontierClass::dominated: return "dominated";
        case FrontierClass::nondominated: return "nondominated";
        case FrontierClass::frontier: return "frontier";
    }
    return "?";
}

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

inline void require_same_dim(const Vector& a, const Vector& b, const char* where) {
    if (a.size() != b.size())
        throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                    std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
}

inline void require_finite(const Eigen::Ref<const Matrix>& m, const char* where) {
    if (!m.allFinite())
        throw std::invalid_argument(std::string(where) + ": non-finite coordinate");
}

}  // namespace pareto
