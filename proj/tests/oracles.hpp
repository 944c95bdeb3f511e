// Test-side oracles. Each one recomputes the quantity under test by an
// independent route (explicit inverses, eigen decompositions, quadrature,
// finite differences, brute-force enumeration) so the library paths they
// check cannot leak into the expected values.
#pragma once

#include "pareto/types.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <random>

namespace oracle {

using pareto::Matrix;
using pareto::PointSet;
using pareto::Scalar;
using pareto::Vector;

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

inline Scalar central_diff(const std::function<Scalar(Scalar)>& f, Scalar x, Scalar h = 1e-6) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline Scalar central_diff2(const std::function<Scalar(Scalar)>& f, Scalar x, Scalar h = 1e-4) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

// ---------------------------------------------------------------------------
// Squared-exponential kernel evaluated from scratch (no library call)
// ---------------------------------------------------------------------------

inline Scalar se_kernel(Scalar eta, const Vector& rho, const Vector& x, const Vector& x2) {
    Scalar q = 0;
    for (int i = 0; i < x.size(); ++i) {
        const Scalar d = (x(i) - x2(i)) / rho(i);
        q += d * d;
    }
    return eta * eta * std::exp(-0.5 * q);
}

// ---------------------------------------------------------------------------
// Dense GP posterior via explicit matrix inverse (the printed noisy-posterior
// equations, solved the naive way)
// ---------------------------------------------------------------------------

struct DensePosterior {
    Vector mean;
    Matrix cov;
};

inline DensePosterior dense_gp_posterior(const PointSet& X, const Vector& Z, Scalar eta,
                                         const Vector& rho, Scalar noise_var, const PointSet& Q) {
    const int n = static_cast<int>(X.rows());
    const int q = static_cast<int>(Q.rows());
    Matrix K(n, n), Kq(q, n), Kqq(q, q);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            K(i, j) = se_kernel(eta, rho, X.row(i).transpose(), X.row(j).transpose());
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < n; ++j)
            Kq(i, j) = se_kernel(eta, rho, Q.row(i).transpose(), X.row(j).transpose());
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j)
            Kqq(i, j) = se_kernel(eta, rho, Q.row(i).transpose(), Q.row(j).transpose());
    Matrix A = K;
    A.diagonal().array() += noise_var;
    const Matrix omega = A.inverse();
    return {Kq * omega * Z, Kqq - Kq * omega * Kq.transpose()};
}

/// Log marginal likelihood with the determinant from an eigendecomposition.
inline Scalar dense_lml(const PointSet& X, const Vector& Z, Scalar eta, const Vector& rho,
                        Scalar noise_var) {
    const int n = static_cast<int>(X.rows());
    Matrix A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            A(i, j) = se_kernel(eta, rho, X.row(i).transpose(), X.row(j).transpose());
    A.diagonal().array() += noise_var;
    const Eigen::SelfAdjointEigenSolver<Matrix> es(A);
    const Scalar logdet = es.eigenvalues().array().log().sum();
    const Vector alpha = A.inverse() * Z;
    return -0.5 * Z.dot(alpha) - 0.5 * logdet - 0.5 * n * std::log(2.0 * M_PI);
}

// ---------------------------------------------------------------------------
// Adaptive Simpson quadrature and EP tilted moments
// ---------------------------------------------------------------------------

inline Scalar adaptive_simpson(const std::function<Scalar(Scalar)>& f, Scalar a, Scalar b,
                               Scalar fa, Scalar fm, Scalar fb, Scalar whole, Scalar tol,
                               int depth) {
    const Scalar m = 0.5 * (a + b);
    const Scalar lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const Scalar flm = f(lm), frm = f(rm);
    const Scalar left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const Scalar right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

/// Pre-splits into equal panels so narrow peaks cannot hide between the
/// initial sample points, then adapts within each panel.
inline Scalar integrate(const std::function<Scalar(Scalar)>& f, Scalar a, Scalar b,
                        Scalar tol = 1e-14, int panels = 24) {
    Scalar total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const Scalar pa = a + (b - a) * p / panels;
        const Scalar pb = a + (b - a) * (p + 1) / panels;
        const Scalar fa = f(pa), fb = f(pb), fm = f(0.5 * (pa + pb));
        const Scalar whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
        total += adaptive_simpson(f, pa, pb, fa, fm, fb, whole, tol, 44);
    }
    return total;
}

struct TiltedMoments {
    Scalar mass;
    Scalar mean;
    Scalar var;
};

/// Moments of Phi(x/nu) N(x | mu, s2) over mu +- 12 sigma, split at the probit
/// transition so the adaptive rule sees smooth pieces.
inline TiltedMoments tilted_moments_quadrature(Scalar mu, Scalar s2, Scalar nu) {
    const Scalar s = std::sqrt(s2);
    const auto g = [&](Scalar x) {
        const Scalar phi = 0.5 * std::erfc(-(x / nu) * M_SQRT1_2);
        const Scalar d = (x - mu) / s;
        return phi * std::exp(-0.5 * d * d) / (s * std::sqrt(2.0 * M_PI));
    };
    const Scalar lo = mu - 12.0 * s, hi = mu + 12.0 * s;
    const auto piecewise = [&](const std::function<Scalar(Scalar)>& f) {
        if (lo < 0.0 && 0.0 < hi) return integrate(f, lo, 0.0) + integrate(f, 0.0, hi);
        return integrate(f, lo, hi);
    };
    const Scalar z = piecewise(g);
    const Scalar m1 = piecewise([&](Scalar x) { return x * g(x); }) / z;
    const Scalar m2 = piecewise([&](Scalar x) { return x * x * g(x); }) / z;
    return {z, m1, m2 - m1 * m1};
}

// ---------------------------------------------------------------------------
// Brute-force dominance
// ---------------------------------------------------------------------------

inline bool any_strongly_dominates(const PointSet& s, const Vector& y) {
    for (int i = 0; i < s.rows(); ++i)
        if ((s.row(i).transpose().array() < y.array()).all()) return true;
    return false;
}

inline bool strongly_dominates_any(const PointSet& s, const Vector& y) {
    for (int i = 0; i < s.rows(); ++i)
        if ((y.array() < s.row(i).transpose().array()).all()) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Random problem generators (seeded)
// ---------------------------------------------------------------------------

inline PointSet random_points(std::mt19937_64& rng, int n, int m, Scalar lo = -1.0,
                              Scalar hi = 1.0) {
    std::uniform_real_distribution<Scalar> u(lo, hi);
    PointSet s(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) s(i, j) = u(rng);
    return s;
}

inline Vector random_vector(std::mt19937_64& rng, int n, Scalar lo = -1.0, Scalar hi = 1.0) {
    std::uniform_real_distribution<Scalar> u(lo, hi);
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = u(rng);
    return v;
}

/// Sample Z ~ N(0, K + noise I) through an eigendecomposition (no Cholesky).
inline Vector sample_gp_targets(std::mt19937_64& rng, const PointSet& X, Scalar eta,
                                const Vector& rho, Scalar noise_var) {
    const int n = static_cast<int>(X.rows());
    Matrix K(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            K(i, j) = se_kernel(eta, rho, X.row(i).transpose(), X.row(j).transpose());
    K.diagonal().array() += noise_var;
    const Eigen::SelfAdjointEigenSolver<Matrix> es(K);
    std::normal_distribution<Scalar> gauss(0.0, 1.0);
    Vector z(n);
    for (int i = 0; i < n; ++i) z(i) = gauss(rng);
    return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() * z;
}

}  // namespace oracle
