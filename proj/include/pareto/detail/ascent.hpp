#pragma once

#include "pareto/types.hpp"

#include <functional>
#include <optional>

namespace pareto::detail {

struct AscentConfig {
    int max_iters = 500;
    Scalar grad_tol = 1e-6;
    Scalar armijo_c = 1e-4;
    Scalar backtrack_shrink = 0.5;
    int max_backtracks = 40;
};

struct AscentResult {
    Vector t;
    Scalar value = -std::numeric_limits<Scalar>::infinity();
    int iterations = 0;
    bool converged = false;
    bool line_search_warning = false;
};

/// Gradient ascent with Armijo backtracking. The successful step length is
/// carried over (and regrown) between iterations. Iterates where the
/// objective throws (numerically infeasible hyperparameters) count as failed
/// backtracks. Deterministic given t0.
inline AscentResult gradient_ascent(const std::function<Scalar(const Vector&)>& objective,
                                    const std::function<Vector(const Vector&)>& gradient,
                                    Vector t0, const AscentConfig& cfg) {
    AscentResult res;
    res.t = std::move(t0);
    res.value = objective(res.t);
    Scalar step = 1.0;
    for (; res.iterations < cfg.max_iters; ++res.iterations) {
        const Vector g = gradient(res.t);
        if (g.norm() < cfg.grad_tol) {
            res.converged = true;
            break;
        }
        Scalar trial = std::min(step * 2.0, 1e3);
        bool improved = false;
        for (int bt = 0; bt < cfg.max_backtracks; ++bt) {
            const Vector t_new = res.t + trial * g;
            std::optional<Scalar> v_new;
            try {
                v_new = objective(t_new);
            } catch (const std::exception&) {
            }
            if (v_new && *v_new >= res.value + cfg.armijo_c * trial * g.squaredNorm()) {
                res.t = t_new;
                res.value = *v_new;
                step = trial;
                improved = true;
                break;
            }
            trial *= cfg.backtrack_shrink;
        }
        if (!improved) {
            res.line_search_warning = true;
            break;
        }
    }
    return res;
}

/// Central finite differences of a scalar objective.
inline Vector fd_gradient(const std::function<Scalar(const Vector&)>& objective, const Vector& t,
                          Scalar step = 1e-4) {
    Vector g(t.size());
    for (int i = 0; i < t.size(); ++i) {
        Vector tp = t, tm = t;
        tp(i) += step;
        tm(i) -= step;
        g(i) = (objective(tp) - objective(tm)) / (2.0 * step);
    }
    return g;
}

}  // namespace pareto::detail
