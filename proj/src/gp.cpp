#include "pareto/gp.hpp"

#include "pareto/detail/ascent.hpp"
#include "pareto/detail/theta_map.hpp"
#include "pareto/normal.hpp"

#include <cmath>
#include <random>

namespace pareto {

Scalar GpModel::predict_mean(const Vector& y) const {
    if (y.size() != inputs.cols()) throw std::invalid_argument("GpModel: query dimension mismatch");
    Scalar mu = 0.0;
    for (int i = 0; i < size(); ++i) mu += alpha(i) * k_value(params, y, inputs.row(i).transpose());
    return mu;
}

Vector GpModel::predict_mean_gradient(const Vector& y) const {
    if (y.size() != inputs.cols()) throw std::invalid_argument("GpModel: query dimension mismatch");
    Vector g = Vector::Zero(dim());
    for (int i = 0; i < size(); ++i) {
        const Vector xi = inputs.row(i).transpose();
        // d/dy_d k(y, x_i) = k(x_i, y) (x_i_d - y_d) / rho_d^2
        for (int d = 0; d < dim(); ++d) g(d) += alpha(i) * k_grad_cross(params, xi, y, d);
    }
    return g;
}

ScoreFunction GpModel::score_function() const {
    ScoreFunction f;
    f.dim = dim();
    GpModel self = *this;
    f.value = [self](const Vector& y) { return self.predict_mean(y); };
    GpModel self2 = *this;
    f.gradient = [self2](const Vector& y) { return self2.predict_mean_gradient(y); };
    return f;
}

GpModel fit_gp(const PointSet& inputs, const Vector& targets, const SeKernelParams& params,
               Scalar noise_var) {
    require(inputs.rows() >= 1, "fit_gp: need at least one training point");
    require(inputs.rows() == targets.size(), "fit_gp: inputs/targets size mismatch");
    require(noise_var >= 0, "fit_gp: negative noise variance");
    require(inputs.cols() == params.rho.size(), "fit_gp: kernel dimension mismatch");
    params.validate();
    require_finite(inputs, "fit_gp");
    require_finite(targets, "fit_gp targets");

    GpModel m;
    m.inputs = inputs;
    m.targets = targets;
    m.params = params;
    m.noise_var = noise_var;
    m.kernel = kernel_matrix(params, inputs);

    Matrix A = m.kernel;
    A.diagonal().array() += noise_var;
    m.factor = psd_cholesky(A, &m.jitter);
    m.alpha = m.factor.solve(targets);
    return m;
}

GpPrediction predict(const GpModel& m, const PointSet& queries) {
    if (queries.rows() > 0 && queries.cols() != m.inputs.cols())
        throw std::invalid_argument("predict: query dimension mismatch");
    const int nq = static_cast<int>(queries.rows());
    GpPrediction out;
    out.mean.resize(nq);
    out.variance.resize(nq);
    const Matrix L = m.factor.matrixL();
    for (int q = 0; q < nq; ++q) {
        const Vector y = queries.row(q).transpose();
        Vector ks(m.size());
        for (int i = 0; i < m.size(); ++i) ks(i) = k_value(m.params, y, m.inputs.row(i).transpose());
        out.mean(q) = ks.dot(m.alpha);
        const Vector v = L.triangularView<Eigen::Lower>().solve(ks);
        out.variance(q) = std::max(0.0, k_value(m.params, y, y) - v.squaredNorm());
    }
    return out;
}

Scalar log_marginal_likelihood(const GpModel& m) {
    const Scalar n = static_cast<Scalar>(m.size());
    return -0.5 * m.targets.dot(m.alpha) - 0.5 * log_det_from_llt(m.factor) - 0.5 * n * kLog2Pi;
}

Vector lml_gradient(const GpModel& m) {
    const int n = m.size();
    const int d = m.dim();
    const Matrix omega = m.factor.solve(Matrix::Identity(n, n));
    const Matrix A = m.alpha * m.alpha.transpose() - omega;

    Vector grad(d + 2);
    // d/dlog(eta): dK/dlog(eta) = 2 K (noise-free part).
    grad(0) = A.cwiseProduct(m.kernel).sum();
    // d/dlog(rho_j): dK_ij = K_ij (x_i_j - x_k_j)^2 / rho_j^2.
    for (int j = 0; j < d; ++j) {
        const Scalar inv_rho2 = 1.0 / (m.params.rho(j) * m.params.rho(j));
        Scalar acc = 0.0;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                const Scalar diff = m.inputs(r, j) - m.inputs(c, j);
                acc += A(r, c) * m.kernel(r, c) * diff * diff * inv_rho2;
            }
        grad(1 + j) = 0.5 * acc;
    }
    // d/dlog(sigma^2): dK = sigma^2 I.
    grad(d + 1) = 0.5 * m.noise_var * A.trace();
    return grad;
}

Scalar log_inverse_gamma(Scalar x, Scalar alpha, Scalar beta) {
    require(x > 0 && alpha > 0 && beta > 0, "log_inverse_gamma: arguments must be positive");
    return alpha * std::log(beta) - std::lgamma(alpha) - (alpha + 1.0) * std::log(x) - beta / x;
}

HyperOptResult optimize_hyperparams(const PointSet& inputs, const Vector& targets,
                                    const SeKernelParams& init, Scalar init_noise_var,
                                    const HyperOptConfig& config) {
    require(inputs.rows() >= 2, "optimize_hyperparams: need at least two training points");
    const bool use_prior = std::isfinite(config.ig_beta);
    const detail::ThetaMap map{static_cast<int>(inputs.cols()), config.tie_lengthscales};

    const auto fit_at = [&](const Vector& t) {
        SeKernelParams p;
        Scalar nv = 0;
        map.unpack(t, &p, &nv);
        return fit_gp(inputs, targets, p, nv);
    };
    const auto objective = [&](const Vector& t) {
        const GpModel m = fit_at(t);
        Scalar val = log_marginal_likelihood(m);
        if (use_prior) val += log_inverse_gamma(m.noise_var, config.ig_alpha, config.ig_beta);
        return val;
    };
    const auto gradient = [&](const Vector& t) {
        const GpModel m = fit_at(t);
        Vector g = map.collapse(lml_gradient(m));
        if (use_prior) g(g.size() - 1) += -(config.ig_alpha + 1.0) + config.ig_beta / m.noise_var;
        return g;
    };

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<Scalar> log_scale(std::log(1e-2), std::log(1e1));
    std::uniform_real_distribution<Scalar> log_noise(std::log(1e-4), std::log(1.0));

    const detail::AscentConfig ascent_cfg{config.max_iters, config.grad_tol, config.armijo_c,
                                          config.backtrack_shrink, config.max_backtracks};
    HyperOptResult best;
    for (int start = 0; start < std::max(1, config.restarts); ++start) {
        Vector t;
        if (start == 0) {
            t = map.pack(init, init_noise_var);
        } else {
            t.resize(map.size());
            for (int i = 0; i + 1 < t.size(); ++i) t(i) = log_scale(rng);
            t(t.size() - 1) = log_noise(rng);
        }
        detail::AscentResult r;
        try {
            r = detail::gradient_ascent(objective, gradient, t, ascent_cfg);
        } catch (const std::exception&) {
            continue;  // degenerate start
        }
        if (r.value > best.objective) {
            best.model = fit_at(r.t);
            best.objective = r.value;
            best.iterations = r.iterations;
            best.converged = r.converged;
            best.line_search_warning = r.line_search_warning;
        }
    }
    if (best.model.size() == 0) throw std::runtime_error("optimize_hyperparams: every start failed");
    return best;
}

}  // namespace pareto
