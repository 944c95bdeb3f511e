#pragma once

#include "pareto/gp.hpp"
#include "pareto/normal.hpp"
#include "pareto/se_kernel.hpp"
#include "pareto/types.hpp"

#include <limits>
#include <vector>

namespace pareto {

// ============================================================================
// GP with probit monotonicity soft constraints, fitted by expectation
// propagation over derivative sites. The posterior mean is the score f(y).
// ============================================================================

/// Requests an increasing latent function at `location` along coordinate
/// `direction`. One constraint per (location, coordinate) pair.
struct MonotonicityConstraint {
    Vector location;
    int direction = 0;
};

/// Single-site moment match of the tilted distribution
///   Phi(x / nu) * N(x | cavity_mean, cavity_var).
struct EpSiteUpdate {
    Scalar tilted_mean = 0;
    Scalar tilted_var = 0;
    Scalar site_mean = 0;   // mu~; 0 when the site is vacuous
    Scalar site_var = 0;    // sigma~^2; +inf when vacuous
    Scalar site_log_z = 0;  // log Z~ (site normalizer given this cavity)
    Scalar log_z_hat = 0;   // log of the tilted distribution's mass
};

EpSiteUpdate ep_site_update(Scalar cavity_mean, Scalar cavity_var, Scalar nu);

/// Per-constraint site parameters and EP diagnostics.
struct EpState {
    Vector site_mean;  // mu~
    Vector site_var;   // sigma~^2 diagonal; +inf marks a vacuous site
    Vector site_logz;
    Vector site_tau;  // natural precision, the quantity actually iterated
    Vector site_nu;   // natural precision * mean
    bool converged = false;
    int iterations = 0;        // sweeps run
    int skipped_updates = 0;   // negative-cavity skips
    Scalar final_max_delta = std::numeric_limits<Scalar>::infinity();
};

struct NoisePrior {
    Scalar alpha = 3.0;
    Scalar beta = std::numeric_limits<Scalar>::infinity();  // +inf: prior ignored

    [[nodiscard]] bool active() const { return std::isfinite(beta); }
};

struct MonotonicGpConfig {
    Scalar nu = 1e-6;  // probit sharpness
    Scalar ep_tol = 1e-6;
    int max_sweeps = 200;
    Scalar damping = 0.8;
    NoisePrior noise_prior;
};

struct MonotonicGpModel {
    PointSet inputs;  // N x M
    Vector targets;   // N
    std::vector<MonotonicityConstraint> constraints;
    SeKernelParams params;
    Scalar noise_var = 0.0;
    MonotonicGpConfig config;
    EpState ep;

    // cached at fit time
    Matrix joint_prior;  // (N+C) x (N+C) covariance over (values, constrained derivatives)
    Vector alpha_joint;  // weights such that f(y) = k_joint(y) . alpha_joint

    [[nodiscard]] int size() const { return static_cast<int>(inputs.rows()); }
    [[nodiscard]] int dim() const { return static_cast<int>(inputs.cols()); }
    [[nodiscard]] int num_constraints() const { return static_cast<int>(constraints.size()); }

    /// Posterior mean of the latent value at y: the surrogate score f(y).
    [[nodiscard]] Scalar score(const Vector& y) const;

    /// Posterior mean of the latent gradient at y (analytic).
    [[nodiscard]] Vector score_gradient(const Vector& y) const;

    /// Posterior covariance of the joint (values, derivatives) system under
    /// the current EP sites; used by diagnostics and tests.
    [[nodiscard]] Matrix joint_posterior_covariance() const;

    [[nodiscard]] ScoreFunction score_function() const;
};

/// Assembles the joint value+derivative prior and runs EP sweeps over the
/// constraint sites until the max site-parameter change drops below ep_tol.
MonotonicGpModel fit_monotonic(const PointSet& inputs, const Vector& targets,
                               const std::vector<MonotonicityConstraint>& constraints,
                               const SeKernelParams& params, Scalar noise_var,
                               const MonotonicGpConfig& config = {});

/// EP approximation of log p(Z, M | X) for the fitted model (the hyperparameter
/// objective before the sigma^2 prior is added).
[[nodiscard]] Scalar ep_log_evidence(const MonotonicGpModel& m);

/// Same as fit_monotonic but with an inverse-gamma(alpha, beta) prior over
/// sigma^2; with optimize=true, kernel hyperparameters and sigma^2 are chosen
/// by gradient ascent (central-difference gradients) on
/// ep_log_evidence + log inverse-gamma(sigma^2). beta = +inf ignores the prior.
MonotonicGpModel fit_with_noise_prior(const PointSet& inputs, const Vector& targets,
                                      const std::vector<MonotonicityConstraint>& constraints,
                                      const SeKernelParams& init_params, Scalar init_noise_var,
                                      Scalar alpha, Scalar beta, bool optimize,
                                      const MonotonicGpConfig& config = {},
                                      const HyperOptConfig& hyper = {});

/// One constraint per training point per coordinate, in point-major order;
/// the placement used by the experiments.
[[nodiscard]] std::vector<MonotonicityConstraint> constraints_on_all(const PointSet& inputs);

/// Recomputes the joint prior and predictive weights from the stored site
/// parameters without re-running EP (used after deserialization).
void refresh_monotonic_caches(MonotonicGpModel& m);

}  // namespace pareto
