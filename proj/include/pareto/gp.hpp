#pragma once

#include "pareto/linalg.hpp"
#include "pareto/se_kernel.hpp"
#include "pareto/types.hpp"

#include <cstdint>
#include <limits>

namespace pareto {

// ============================================================================
// Standard zero-mean GP regression with squared-exponential kernel
// ============================================================================

/// Fitted GP over objective-space inputs. Inputs are objective points, targets
/// are scores; prediction is the noiseless latent posterior.
struct GpModel {
    PointSet inputs;       // N x M
    Vector targets;        // N
    SeKernelParams params;
    Scalar noise_var = 0.0;

    // cached at fit time
    Matrix kernel;              // K(X, X), noise-free
    Eigen::LLT<Matrix> factor;  // of K + noise_var I (+ applied jitter)
    Vector alpha;               // (K + noise_var I)^-1 Z
    Scalar jitter = 0.0;

    [[nodiscard]] int size() const { return static_cast<int>(inputs.rows()); }
    [[nodiscard]] int dim() const { return static_cast<int>(inputs.cols()); }

    [[nodiscard]] Scalar predict_mean(const Vector& y) const;
    [[nodiscard]] Vector predict_mean_gradient(const Vector& y) const;

    [[nodiscard]] ScoreFunction score_function() const;
};

GpModel fit_gp(const PointSet& inputs, const Vector& targets, const SeKernelParams& params,
               Scalar noise_var);

/// Posterior mean and variance at each query row (variance clamped at 0).
struct GpPrediction {
    Vector mean;
    Vector variance;
};
GpPrediction predict(const GpModel& m, const PointSet& queries);

[[nodiscard]] Scalar log_marginal_likelihood(const GpModel& m);

/// Analytic gradient of the log marginal likelihood with respect to
/// (log eta, log rho_1..M, log sigma^2), in that order.
[[nodiscard]] Vector lml_gradient(const GpModel& m);

// ============================================================================
// Hyperparameter optimization: gradient ascent with backtracking line search
// ============================================================================

struct HyperOptConfig {
    int max_iters = 500;
    Scalar grad_tol = 1e-6;
    Scalar armijo_c = 1e-4;
    Scalar backtrack_shrink = 0.5;
    int max_backtracks = 40;
    int restarts = 5;          // first start uses the provided init
    std::uint64_t seed = 0;
    bool tie_lengthscales = false;

    // Optional inverse-gamma prior on sigma^2 added to the objective;
    // beta = +inf disables it.
    Scalar ig_alpha = 3.0;
    Scalar ig_beta = std::numeric_limits<Scalar>::infinity();
};

struct HyperOptResult {
    GpModel model;
    Scalar objective = -std::numeric_limits<Scalar>::infinity();
    int iterations = 0;
    bool converged = false;           // gradient norm below tolerance
    bool line_search_warning = false; // every line search failed at some iterate
};

HyperOptResult optimize_hyperparams(const PointSet& inputs, const Vector& targets,
                                    const SeKernelParams& init, Scalar init_noise_var,
                                    const HyperOptConfig& config = {});

/// log p(x; alpha, beta) of the inverse-gamma density; used as the sigma^2 prior.
[[nodiscard]] Scalar log_inverse_gamma(Scalar x, Scalar alpha, Scalar beta);

}  // namespace pareto
