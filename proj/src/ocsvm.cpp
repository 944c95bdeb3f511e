#include "pareto/ocsvm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace pareto {

Scalar OneClassSvmModel::decision(const Vector& y) const {
    if (support_points.rows() > 0 && y.size() != support_points.cols())
        throw std::invalid_argument("OneClassSvmModel::decision: dimension mismatch");
    Scalar v = -rho_offset;
    for (int i = 0; i < support_points.rows(); ++i)
        v += support_alphas(i) * rbf_kernel(gamma, support_points.row(i).transpose(), y);
    return v;
}

Vector OneClassSvmModel::decision_gradient(const Vector& y) const {
    Vector g = Vector::Zero(y.size());
    for (int i = 0; i < support_points.rows(); ++i) {
        const Vector s = support_points.row(i).transpose();
        g += support_alphas(i) * rbf_kernel(gamma, s, y) * 2.0 * gamma * (s - y);
    }
    return g;
}

ScoreFunction OneClassSvmModel::score_function(bool flip_sign) const {
    ScoreFunction f;
    f.dim = static_cast<int>(support_points.cols());
    const Scalar sign = flip_sign ? -1.0 : 1.0;
    OneClassSvmModel self = *this;
    f.value = [self, sign](const Vector& y) { return sign * self.decision(y); };
    OneClassSvmModel self2 = *this;
    f.gradient = [self2, sign](const Vector& y) { return Vector(sign * self2.decision_gradient(y)); };
    return f;
}

Scalar OneClassSvmModel::dual_objective() const {
    Scalar q = 0.0;
    for (int i = 0; i < support_points.rows(); ++i)
        for (int j = 0; j < support_points.rows(); ++j)
            q += support_alphas(i) * support_alphas(j) *
                 rbf_kernel(gamma, support_points.row(i).transpose(),
                            support_points.row(j).transpose());
    return -0.5 * q;
}

OneClassSvmModel train_ocsvm(const PointSet& data, Scalar nu, Scalar gamma,
                             const OcsvmConfig& config) {
    const int n = static_cast<int>(data.rows());
    require(n >= 2, "train_ocsvm: need at least two points");
    require(nu > 0 && nu <= 1, "train_ocsvm: nu must be in (0, 1]");
    require(gamma > 0, "train_ocsvm: gamma must be positive");
    require_finite(data, "train_ocsvm");

    const Scalar box = 1.0 / (nu * n);

    Matrix Q(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            Q(i, j) = rbf_kernel(gamma, data.row(i).transpose(), data.row(j).transpose());
            Q(j, i) = Q(i, j);
        }

    // libsvm-style start: fill boxes until the alphas sum to one.
    Vector alpha = Vector::Zero(n);
    {
        Scalar remaining = 1.0;
        for (int i = 0; i < n && remaining > 0; ++i) {
            alpha(i) = std::min(box, remaining);
            remaining -= alpha(i);
        }
    }
    Vector grad = Q * alpha;

    const Scalar at_bound = box * (1.0 - 1e-12);
    Scalar gap = std::numeric_limits<Scalar>::infinity();
    long it = 0;
    for (; it < config.max_iters; ++it) {
        // Mass flows from high-gradient alphas (that can shrink) to the lowest
        // gradient one (that can grow). The receiving index is the maximal
        // violator; the donor maximizes the second-order gain, which avoids
        // the end-game zigzag of the purely first-order pair.
        int up = -1, down = -1;
        for (int i = 0; i < n; ++i)
            if (alpha(i) < at_bound && (up < 0 || grad(i) < grad(up))) up = i;
        if (up >= 0) {
            Scalar best_gain = 0.0;
            Scalar max_viol = 0.0;
            for (int j = 0; j < n; ++j) {
                if (alpha(j) <= 0) continue;
                const Scalar viol = grad(j) - grad(up);
                if (viol <= 0) continue;
                max_viol = std::max(max_viol, viol);
                const Scalar denom =
                    std::max(Q(up, up) + Q(j, j) - 2.0 * Q(up, j), 1e-12);
                const Scalar gain = viol * viol / denom;
                if (gain > best_gain) {
                    best_gain = gain;
                    down = j;
                }
            }
            gap = max_viol;
        }
        if (up < 0 || down < 0) {  // nothing can move (nu = 1) or no violator left
            gap = 0.0;
            break;
        }
        if (gap <= config.kkt_tol) break;

        const Scalar step_gap = grad(down) - grad(up);
        const Scalar denom = Q(up, up) + Q(down, down) - 2.0 * Q(up, down);
        Scalar t = denom > 1e-12 ? step_gap / denom : std::numeric_limits<Scalar>::infinity();
        t = std::min({t, box - alpha(up), alpha(down)});
        alpha(up) += t;
        alpha(down) -= t;
        grad += t * (Q.col(up) - Q.col(down));
    }
    if (gap > config.kkt_tol)
        throw std::runtime_error("train_ocsvm: no convergence in " +
                                 std::to_string(config.max_iters) +
                                 " iterations (KKT gap " + std::to_string(gap) + ")");

    // Offset from the KKT conditions: decision is zero at non-bound support
    // vectors; fall back to the midpoint of the active bounds.
    Scalar rho = 0.0;
    int free_count = 0;
    Scalar lo = -std::numeric_limits<Scalar>::infinity();
    Scalar hi = std::numeric_limits<Scalar>::infinity();
    for (int i = 0; i < n; ++i) {
        if (alpha(i) > 1e-12 && alpha(i) < at_bound) {
            rho += grad(i);
            ++free_count;
        }
        if (alpha(i) > 1e-12) lo = std::max(lo, grad(i));
        if (alpha(i) < at_bound) hi = std::min(hi, grad(i));
    }
    rho = free_count > 0 ? rho / free_count : 0.5 * (lo + hi);

    OneClassSvmModel m;
    m.gamma = gamma;
    m.nu = nu;
    m.training_size = n;
    m.rho_offset = rho;
    m.kkt_gap = gap;
    m.iterations = it;
    std::vector<int> sv;
    for (int i = 0; i < n; ++i)
        if (alpha(i) > 1e-12) sv.push_back(i);
    m.support_points.resize(static_cast<int>(sv.size()), data.cols());
    m.support_alphas.resize(static_cast<int>(sv.size()));
    for (size_t k = 0; k < sv.size(); ++k) {
        m.support_points.row(static_cast<int>(k)) = data.row(sv[k]);
        m.support_alphas(static_cast<int>(k)) = alpha(sv[k]);
    }
    return m;
}

Scalar cross_validation_score(const PointSet& data, Scalar nu, Scalar gamma, int folds,
                              std::uint64_t seed, const OcsvmConfig& config) {
    const int n = static_cast<int>(data.rows());
    require(folds >= 2 && folds <= n, "cross_validation_score: bad fold count");
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);

    Scalar total = 0.0;
    int held_out = 0;
    for (int f = 0; f < folds; ++f) {
        std::vector<int> train, test;
        for (int i = 0; i < n; ++i)
            (i % folds == f ? test : train).push_back(perm[static_cast<size_t>(i)]);
        PointSet train_set(static_cast<int>(train.size()), data.cols());
        for (size_t i = 0; i < train.size(); ++i)
            train_set.row(static_cast<int>(i)) = data.row(train[i]);
        const OneClassSvmModel m = train_ocsvm(train_set, nu, gamma, config);
        for (int idx : test) {
            total += m.decision(data.row(idx).transpose());
            ++held_out;
        }
    }
    return total / held_out;
}

Scalar select_gamma_cv(const PointSet& data, Scalar nu, const std::vector<Scalar>& gammas, int folds,
                       std::uint64_t seed, const OcsvmConfig& config) {
    require(!gammas.empty(), "select_gamma_cv: no candidates");
    Scalar best_gamma = gammas.front();
    Scalar best_score = -std::numeric_limits<Scalar>::infinity();
    for (Scalar g : gammas) {
        const Scalar s = cross_validation_score(data, nu, g, folds, seed, config);
        if (s > best_score) {
            best_score = s;
            best_gamma = g;
        }
    }
    return best_gamma;
}

}  // namespace pareto
