#include "pareto/monotonic_gp.hpp"

#include "pareto/detail/ascent.hpp"
#include "pareto/detail/theta_map.hpp"
#include "pareto/linalg.hpp"

#include <cmath>
#include <random>

namespace pareto {

namespace {

// Sites with precision below this are treated as vacuous (no observation).
constexpr Scalar kVacuousTau = 1e-10;
constexpr Scalar kMinCavityTau = 1e-12;

/// Joint prior covariance over (latent values at inputs, latent derivatives
/// at the constraint locations/directions).
Matrix joint_kernel(const SeKernelParams& p, const PointSet& X,
                    const std::vector<MonotonicityConstraint>& cons) {
    const int n = static_cast<int>(X.rows());
    const int c = static_cast<int>(cons.size());
    Matrix K(n + c, n + c);
    K.topLeftCorner(n, n) = kernel_matrix(p, X);
    for (int j = 0; j < c; ++j) {
        for (int i = 0; i < n; ++i) {
            K(i, n + j) = k_grad_cross(p, X.row(i).transpose(), cons[j].location, cons[j].direction);
            K(n + j, i) = K(i, n + j);
        }
        for (int i = 0; i <= j; ++i) {
            K(n + i, n + j) = k_grad_grad(p, cons[i].location, cons[j].location, cons[i].direction,
                                          cons[j].direction);
            K(n + j, n + i) = K(n + i, n + j);
        }
    }
    return K;
}

Vector joint_cross_cov(const SeKernelParams& p, const PointSet& X,
                       const std::vector<MonotonicityConstraint>& cons, const Vector& y) {
    const int n = static_cast<int>(X.rows());
    const int c = static_cast<int>(cons.size());
    Vector k(n + c);
    for (int i = 0; i < n; ++i) k(i) = k_value(p, y, X.row(i).transpose());
    for (int j = 0; j < c; ++j)
        k(n + j) = k_grad_cross(p, y, cons[j].location, cons[j].direction);
    return k;
}

// Gaussian base posterior over the derivative coordinates after conditioning
// on the noisy value observations.
struct DerivBase {
    Vector a_values;   // (K_ff + noise I)^-1 Z
    Matrix ainv_kfd;   // (K_ff + noise I)^-1 K_fd
    Vector mean;       // prior-from-values mean of the derivative block
    Matrix cov;        // and its covariance
};

DerivBase make_deriv_base(const Matrix& K, const Vector& targets, Scalar noise_var, int n, int c) {
    Matrix A = K.topLeftCorner(n, n);
    A.diagonal().array() += noise_var;
    const Eigen::LLT<Matrix> factor = psd_cholesky(A);
    DerivBase base;
    base.a_values = factor.solve(targets);
    base.ainv_kfd = factor.solve(K.topRightCorner(n, c));
    base.mean = K.topRightCorner(n, c).transpose() * base.a_values;
    base.cov = K.bottomRightCorner(c, c) - K.topRightCorner(n, c).transpose() * base.ainv_kfd;
    base.cov = 0.5 * (base.cov + base.cov.transpose());
    return base;
}

// Posterior over the derivative block given the base and site naturals.
void site_posterior(const DerivBase& base, const Vector& tau, const Vector& nu_site, Vector* mean,
                    Matrix* cov) {
    const Vector sqrt_w = tau.array().max(0.0).sqrt();
    Matrix B = sqrt_w.asDiagonal() * base.cov * sqrt_w.asDiagonal();
    B.diagonal().array() += 1.0;
    const Eigen::LLT<Matrix> bf = psd_cholesky(B);
    // w = W^1/2 B^-1 (nu~/sqrt(tau~) - W^1/2 mu0); vacuous rows contribute nothing
    Vector rhs(tau.size());
    for (int i = 0; i < tau.size(); ++i)
        rhs(i) = (tau(i) > 0 ? nu_site(i) / std::sqrt(tau(i)) : 0.0) - sqrt_w(i) * base.mean(i);
    const Vector w = sqrt_w.asDiagonal() * bf.solve(rhs);
    *mean = base.mean + base.cov * w;
    const Matrix half = bf.matrixL().solve(Matrix(sqrt_w.asDiagonal() * base.cov));
    *cov = base.cov - half.transpose() * half;
    *cov = 0.5 * (*cov + cov->transpose());
}

Vector site_weight_vector(const DerivBase& base, const Vector& tau, const Vector& nu_site) {
    const Vector sqrt_w = tau.array().max(0.0).sqrt();
    Matrix B = sqrt_w.asDiagonal() * base.cov * sqrt_w.asDiagonal();
    B.diagonal().array() += 1.0;
    const Eigen::LLT<Matrix> bf = psd_cholesky(B);
    Vector rhs(tau.size());
    for (int i = 0; i < tau.size(); ++i)
        rhs(i) = (tau(i) > 0 ? nu_site(i) / std::sqrt(tau(i)) : 0.0) - sqrt_w(i) * base.mean(i);
    return sqrt_w.asDiagonal() * bf.solve(rhs);
}

}  // namespace

EpSiteUpdate ep_site_update(Scalar cavity_mean, Scalar cavity_var, Scalar nu) {
    require(cavity_var > 0, "ep_site_update: cavity variance must be positive");
    require(nu > 0, "ep_site_update: nu must be positive");

    const Scalar denom = std::sqrt(nu * nu + cavity_var);
    const Scalar z = cavity_mean / denom;
    const Scalar ratio = norm_pdf_over_cdf(z);

    EpSiteUpdate u;
    u.log_z_hat = log_norm_cdf(z);
    u.tilted_mean = cavity_mean + cavity_var * ratio / denom;
    u.tilted_var = cavity_var - cavity_var * cavity_var * ratio * (z + ratio) / (nu * nu + cavity_var);
    if (u.tilted_var <= 0) u.tilted_var = cavity_var * 1e-15;  // deep-tail roundoff guard

    const Scalar tau_site = std::max(0.0, 1.0 / u.tilted_var - 1.0 / cavity_var);
    if (tau_site <= kVacuousTau) {
        u.site_mean = 0.0;
        u.site_var = std::numeric_limits<Scalar>::infinity();
        u.site_log_z = u.log_z_hat;
        return u;
    }
    const Scalar nu_site = u.tilted_mean / u.tilted_var - cavity_mean / cavity_var;
    u.site_var = 1.0 / tau_site;
    u.site_mean = nu_site / tau_site;
    const Scalar v_sum = u.site_var + cavity_var;
    const Scalar d = u.site_mean - cavity_mean;
    u.site_log_z = u.log_z_hat + 0.5 * std::log(2.0 * M_PI * v_sum) + d * d / (2.0 * v_sum);
    return u;
}

std::vector<MonotonicityConstraint> constraints_on_all(const PointSet& inputs) {
    std::vector<MonotonicityConstraint> cons;
    cons.reserve(static_cast<size_t>(inputs.rows() * inputs.cols()));
    for (int i = 0; i < inputs.rows(); ++i)
        for (int d = 0; d < inputs.cols(); ++d)
            cons.push_back({inputs.row(i).transpose(), d});
    return cons;
}

MonotonicGpModel fit_monotonic(const PointSet& inputs, const Vector& targets,
                               const std::vector<MonotonicityConstraint>& constraints,
                               const SeKernelParams& params, Scalar noise_var,
                               const MonotonicGpConfig& config) {
    require(inputs.rows() >= 1, "fit_monotonic: empty inputs");
    require(inputs.rows() == targets.size(), "fit_monotonic: inputs/targets size mismatch");
    require(noise_var >= 0, "fit_monotonic: negative noise variance");
    require(config.nu > 0, "fit_monotonic: nu must be positive");
    params.validate();
    require(inputs.cols() == params.rho.size(), "fit_monotonic: kernel dimension mismatch");
    require_finite(inputs, "fit_monotonic");
    for (size_t i = 0; i < constraints.size(); ++i) {
        const auto& ci = constraints[i];
        require(ci.location.size() == inputs.cols(), "fit_monotonic: constraint dimension mismatch");
        require(ci.direction >= 0 && ci.direction < inputs.cols(),
                "fit_monotonic: constraint direction out of range");
        for (size_t j = 0; j < i; ++j)
            if (constraints[j].direction == ci.direction && constraints[j].location == ci.location)
                throw std::invalid_argument("fit_monotonic: duplicate constraint");
    }

    const int n = static_cast<int>(inputs.rows());
    const int c = static_cast<int>(constraints.size());

    MonotonicGpModel m;
    m.inputs = inputs;
    m.targets = targets;
    m.constraints = constraints;
    m.params = params;
    m.noise_var = noise_var;
    m.config = config;
    m.joint_prior = joint_kernel(params, inputs, constraints);
    psd_cholesky(m.joint_prior);  // joint prior must be PSD (throws otherwise)

    const DerivBase base = make_deriv_base(m.joint_prior, targets, noise_var, n, c);

    EpState& ep = m.ep;
    ep.site_tau = Vector::Zero(c);
    ep.site_nu = Vector::Zero(c);
    ep.site_mean = Vector::Zero(c);
    ep.site_var = Vector::Constant(c, std::numeric_limits<Scalar>::infinity());
    ep.site_logz = Vector::Zero(c);

    Vector mu = base.mean;
    Matrix sig = base.cov;
    Scalar damping = config.damping;

    if (c == 0) ep.converged = true;
    for (int sweep = 0; sweep < config.max_sweeps && c > 0; ++sweep) {
        Scalar max_delta = 0.0;
        for (int i = 0; i < c; ++i) {
            const Scalar v_i = sig(i, i);
            const Scalar mu_i = mu(i);
            const Scalar tau_cav = 1.0 / v_i - ep.site_tau(i);
            if (!(tau_cav > kMinCavityTau)) {
                ++ep.skipped_updates;
                damping = std::max(0.05, 0.5 * damping);
                continue;
            }
            const Scalar nu_cav = mu_i / v_i - ep.site_nu(i);
            const EpSiteUpdate upd = ep_site_update(nu_cav / tau_cav, 1.0 / tau_cav, config.nu);

            const Scalar tau_raw = std::max(0.0, 1.0 / upd.tilted_var - tau_cav);
            const Scalar nu_raw = upd.tilted_mean / upd.tilted_var - nu_cav;
            const Scalar tau_new = ep.site_tau(i) + damping * (tau_raw - ep.site_tau(i));
            const Scalar nu_new = ep.site_nu(i) + damping * (nu_raw - ep.site_nu(i));
            const Scalar d_tau = tau_new - ep.site_tau(i);
            const Scalar d_nu = nu_new - ep.site_nu(i);
            max_delta = std::max({max_delta, std::abs(d_tau), std::abs(d_nu)});

            const Scalar denom = 1.0 + d_tau * v_i;
            const Vector s = sig.col(i);
            sig.noalias() -= (d_tau / denom) * (s * s.transpose());
            mu.noalias() += ((d_nu - d_tau * mu_i) / denom) * s;
            ep.site_tau(i) = tau_new;
            ep.site_nu(i) = nu_new;
            ep.site_logz(i) = upd.site_log_z;
        }
        site_posterior(base, ep.site_tau, ep.site_nu, &mu, &sig);  // refresh against drift
        ep.iterations = sweep + 1;
        ep.final_max_delta = max_delta;
        if (max_delta < config.ep_tol) {
            ep.converged = true;
            break;
        }
    }

    // Mean/variance site view and normalizers at the converged cavities.
    for (int i = 0; i < c; ++i) {
        if (ep.site_tau(i) > kVacuousTau) {
            ep.site_var(i) = 1.0 / ep.site_tau(i);
            ep.site_mean(i) = ep.site_nu(i) / ep.site_tau(i);
        } else {
            ep.site_var(i) = std::numeric_limits<Scalar>::infinity();
            ep.site_mean(i) = 0.0;
        }
        const Scalar tau_cav = 1.0 / sig(i, i) - ep.site_tau(i);
        if (tau_cav > kMinCavityTau) {
            const Scalar m_cav = (mu(i) / sig(i, i) - ep.site_nu(i)) / tau_cav;
            const Scalar v_cav = 1.0 / tau_cav;
            const EpSiteUpdate at_cav = ep_site_update(m_cav, v_cav, config.nu);
            if (std::isfinite(ep.site_var(i))) {
                const Scalar v_sum = ep.site_var(i) + v_cav;
                const Scalar d = ep.site_mean(i) - m_cav;
                ep.site_logz(i) =
                    at_cav.log_z_hat + 0.5 * std::log(2.0 * M_PI * v_sum) + d * d / (2.0 * v_sum);
            } else {
                ep.site_logz(i) = at_cav.log_z_hat;
            }
        } else {
            // No removable cavity: the site is vacuous against an (almost)
            // infinite-variance marginal, but the constraint still carries
            // its tilted mass under that marginal.
            ep.site_logz(i) =
                log_norm_cdf(mu(i) / std::sqrt(config.nu * config.nu + sig(i, i)));
        }
    }

    // Predictive weights for the whole joint system.
    m.alpha_joint.resize(n + c);
    if (c > 0) {
        const Vector w = site_weight_vector(base, ep.site_tau, ep.site_nu);
        m.alpha_joint.head(n) = base.a_values - base.ainv_kfd * w;
        m.alpha_joint.tail(c) = w;
    } else {
        m.alpha_joint = base.a_values;
    }
    return m;
}

void refresh_monotonic_caches(MonotonicGpModel& m) {
    const int n = m.size();
    const int c = m.num_constraints();
    require(m.ep.site_tau.size() == c && m.ep.site_nu.size() == c,
            "refresh_monotonic_caches: site parameter length mismatch");
    m.joint_prior = joint_kernel(m.params, m.inputs, m.constraints);
    psd_cholesky(m.joint_prior);
    const DerivBase base = make_deriv_base(m.joint_prior, m.targets, m.noise_var, n, c);
    m.alpha_joint.resize(n + c);
    if (c > 0) {
        const Vector w = site_weight_vector(base, m.ep.site_tau, m.ep.site_nu);
        m.alpha_joint.head(n) = base.a_values - base.ainv_kfd * w;
        m.alpha_joint.tail(c) = w;
    } else {
        m.alpha_joint = base.a_values;
    }
}

Scalar MonotonicGpModel::score(const Vector& y) const {
    if (y.size() != inputs.cols()) throw std::invalid_argument("MonotonicGpModel: dimension mismatch");
    return joint_cross_cov(params, inputs, constraints, y).dot(alpha_joint);
}

Vector MonotonicGpModel::score_gradient(const Vector& y) const {
    if (y.size() != inputs.cols()) throw std::invalid_argument("MonotonicGpModel: dimension mismatch");
    Vector g = Vector::Zero(dim());
    const int n = size();
    for (int d = 0; d < dim(); ++d) {
        for (int i = 0; i < n; ++i)
            g(d) += alpha_joint(i) * k_grad_cross(params, inputs.row(i).transpose(), y, d);
        for (int j = 0; j < num_constraints(); ++j)
            g(d) += alpha_joint(n + j) *
                    k_grad_grad(params, y, constraints[j].location, d, constraints[j].direction);
    }
    return g;
}

Matrix MonotonicGpModel::joint_posterior_covariance() const {
    const int n = size();
    const int c = num_constraints();
    Matrix A = joint_prior.topLeftCorner(n, n);
    A.diagonal().array() += noise_var;
    const Eigen::LLT<Matrix> factor = psd_cholesky(A);
    const Matrix kv = joint_prior.leftCols(n);  // (n+c) x n
    Matrix sig0 = joint_prior - kv * factor.solve(kv.transpose());
    sig0 = 0.5 * (sig0 + sig0.transpose());
    if (c == 0) return sig0;

    const Vector sqrt_w = ep.site_tau.array().max(0.0).sqrt();
    Matrix B = sqrt_w.asDiagonal() * sig0.bottomRightCorner(c, c) * sqrt_w.asDiagonal();
    B.diagonal().array() += 1.0;
    const Eigen::LLT<Matrix> bf = psd_cholesky(B);
    const Matrix cross = sig0.rightCols(c) * sqrt_w.asDiagonal();  // (n+c) x c
    const Matrix half = bf.matrixL().solve(Matrix(cross.transpose()));
    Matrix post = sig0 - half.transpose() * half;
    return 0.5 * (post + post.transpose());
}

ScoreFunction MonotonicGpModel::score_function() const {
    ScoreFunction f;
    f.dim = dim();
    MonotonicGpModel self = *this;
    f.value = [self](const Vector& y) { return self.score(y); };
    MonotonicGpModel self2 = *this;
    f.gradient = [self2](const Vector& y) { return self2.score_gradient(y); };
    return f;
}

Scalar ep_log_evidence(const MonotonicGpModel& m) {
    const int n = m.size();
    const int c = m.num_constraints();

    std::vector<int> coords;  // joint coordinates with an observation attached
    coords.reserve(static_cast<size_t>(n + c));
    for (int i = 0; i < n; ++i) coords.push_back(i);
    for (int j = 0; j < c; ++j)
        if (m.ep.site_tau(j) > kVacuousTau) coords.push_back(n + j);

    const int na = static_cast<int>(coords.size());
    Matrix cov(na, na);
    Vector t(na);
    for (int a = 0; a < na; ++a) {
        const int ia = coords[a];
        for (int b = 0; b < na; ++b) cov(a, b) = m.joint_prior(ia, coords[b]);
        if (ia < n) {
            cov(a, a) += m.noise_var;
            t(a) = m.targets(ia);
        } else {
            cov(a, a) += 1.0 / m.ep.site_tau(ia - n);
            t(a) = m.ep.site_nu(ia - n) / m.ep.site_tau(ia - n);
        }
    }
    const Eigen::LLT<Matrix> factor = psd_cholesky(cov);
    Scalar value = -0.5 * t.dot(factor.solve(t)) - 0.5 * log_det_from_llt(factor) -
                   0.5 * static_cast<Scalar>(na) * kLog2Pi;
    value += m.ep.site_logz.sum();  // vacuous sites contribute their tilted mass only
    return value;
}

MonotonicGpModel fit_with_noise_prior(const PointSet& inputs, const Vector& targets,
                                      const std::vector<MonotonicityConstraint>& constraints,
                                      const SeKernelParams& init_params, Scalar init_noise_var,
                                      Scalar alpha, Scalar beta, bool optimize,
                                      const MonotonicGpConfig& config, const HyperOptConfig& hyper) {
    require(alpha > 0, "fit_with_noise_prior: alpha must be positive");
    require(beta > 0, "fit_with_noise_prior: beta must be positive");
    MonotonicGpConfig cfg = config;
    cfg.noise_prior = NoisePrior{alpha, beta};

    if (!optimize) return fit_monotonic(inputs, targets, constraints, init_params, init_noise_var, cfg);

    const detail::ThetaMap map{static_cast<int>(inputs.cols()), hyper.tie_lengthscales};
    const auto fit_at = [&](const Vector& t) {
        SeKernelParams p;
        Scalar nv = 0;
        map.unpack(t, &p, &nv);
        return fit_monotonic(inputs, targets, constraints, p, nv, cfg);
    };
    const auto objective = [&](const Vector& t) {
        const MonotonicGpModel m = fit_at(t);
        Scalar val = ep_log_evidence(m);
        if (cfg.noise_prior.active()) val += log_inverse_gamma(m.noise_var, alpha, beta);
        return val;
    };
    // EP evidence gradients through the site fixed point are cumbersome;
    // central differences over the log-hyperparameters keep it exact enough
    // and deterministic.
    const auto gradient = [&](const Vector& t) { return detail::fd_gradient(objective, t, 1e-4); };

    std::mt19937_64 rng(hyper.seed);
    std::uniform_real_distribution<Scalar> log_scale(std::log(1e-2), std::log(1e1));
    std::uniform_real_distribution<Scalar> log_noise(std::log(1e-4), std::log(1.0));
    const detail::AscentConfig ascent_cfg{hyper.max_iters, hyper.grad_tol, hyper.armijo_c,
                                          hyper.backtrack_shrink, hyper.max_backtracks};

    Vector best_t;
    Scalar best_val = -std::numeric_limits<Scalar>::infinity();
    for (int start = 0; start < std::max(1, hyper.restarts); ++start) {
        Vector t;
        if (start == 0) {
            t = map.pack(init_params, init_noise_var);
        } else {
            t.resize(map.size());
            for (int i = 0; i + 1 < t.size(); ++i) t(i) = log_scale(rng);
            t(t.size() - 1) = log_noise(rng);
        }
        detail::AscentResult r;
        try {
            r = detail::gradient_ascent(objective, gradient, t, ascent_cfg);
        } catch (const std::exception&) {
            continue;
        }
        if (r.value > best_val) {
            best_val = r.value;
            best_t = r.t;
        }
    }
    if (best_t.size() == 0) throw std::runtime_error("fit_with_noise_prior: every start failed");
    return fit_at(best_t);
}

}  // namespace pareto
