#pragma once

#include "pareto/types.hpp"

#include <cstdint>
#include <vector>

namespace pareto {

// ============================================================================
// One-class SVM with RBF kernel K(x, y) = exp(-gamma |x - y|^2), solved in the
// dual by pairwise coordinate ascent (SMO-style, maximal violating pair).
// ============================================================================

inline Scalar rbf_kernel(Scalar gamma, const Vector& x, const Vector& y) {
    require_same_dim(x, y, "rbf_kernel");
    return std::exp(-gamma * (x - y).squaredNorm());
}

struct OneClassSvmModel {
    PointSet support_points;  // rows with alpha > 0
    Vector support_alphas;    // 0 < alpha_i <= 1/(nu N), sum over all = 1
    Scalar rho_offset = 0.0;
    Scalar gamma = 1.0;
    Scalar nu = 0.5;
    int training_size = 0;
    Scalar kkt_gap = 0.0;  // at termination
    long iterations = 0;

    /// Decision value sum_i alpha_i K(s_i, y) - rho_offset; its zero set is
    /// the model's frontier estimate. Positive inside the learned region.
    [[nodiscard]] Scalar decision(const Vector& y) const;

    [[nodiscard]] Vector decision_gradient(const Vector& y) const;

    /// The raw decision is positive inside the learned (data) region, which is
    /// the dominated side near the frontier but not globally; flip_sign is the
    /// audit adapter. No orientation satisfies the score-function sign
    /// convention everywhere, which is exactly what the audits expose.
    [[nodiscard]] ScoreFunction score_function(bool flip_sign = false) const;

    [[nodiscard]] Scalar dual_objective() const;  // -1/2 a' Q a, the maximized dual
};

struct OcsvmConfig {
    Scalar kkt_tol = 1e-6;
    long max_iters = 100000;
};

OneClassSvmModel train_ocsvm(const PointSet& data, Scalar nu, Scalar gamma,
                             const OcsvmConfig& config = {});

/// Mean held-out decision value under k-fold cross-validation; the
/// hyperparameter-selection score for gamma.
Scalar cross_validation_score(const PointSet& data, Scalar nu, Scalar gamma, int folds,
                              std::uint64_t seed, const OcsvmConfig& config = {});

/// Picks the gamma with the best cross-validation score.
Scalar select_gamma_cv(const PointSet& data, Scalar nu, const std::vector<Scalar>& gammas, int folds,
                       std::uint64_t seed, const OcsvmConfig& config = {});

}  // namespace pareto
