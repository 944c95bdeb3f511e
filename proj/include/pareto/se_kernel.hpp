#pragma once

#include "pareto/types.hpp"

namespace pareto {

/// Squared-exponential kernel k(x, x') = eta^2 exp(-1/2 sum_i (x_i - x'_i)^2 / rho_i^2)
/// with per-dimension length-scales.
struct SeKernelParams {
    Scalar eta = 1.0;
    Vector rho;  // one positive length-scale per input dimension

    [[nodiscard]] int dim() const { return static_cast<int>(rho.size()); }

    void validate() const {
        require(eta > 0, "SeKernelParams: eta must be positive");
        require(rho.size() > 0 && (rho.array() > 0).all(), "SeKernelParams: rho must be positive");
    }

    static SeKernelParams isotropic(Scalar eta, Scalar rho, int dim) {
        SeKernelParams p;
        p.eta = eta;
        p.rho = Vector::Constant(dim, rho);
        return p;
    }
};

inline void check_kernel_dims(const SeKernelParams& p, const Vector& x, const Vector& x2) {
    if (x.size() != p.rho.size() || x2.size() != p.rho.size())
        throw std::invalid_argument("se_kernel: dimension mismatch with rho");
}

inline Scalar k_value(const SeKernelParams& p, const Vector& x, const Vector& x2) {
    check_kernel_dims(p, x, x2);
    const Scalar q = ((x - x2).array() / p.rho.array()).square().sum();
    return p.eta * p.eta * std::exp(-0.5 * q);
}

/// Cov(f(x), df(x2)/dx2_d) = dk(x, x2)/dx2_d = k(x, x2) (x_d - x2_d) / rho_d^2.
inline Scalar k_grad_cross(const SeKernelParams& p, const Vector& x, const Vector& x2, int d) {
    check_kernel_dims(p, x, x2);
    require(d >= 0 && d < p.dim(), "k_grad_cross: coordinate index out of range");
    return k_value(p, x, x2) * (x(d) - x2(d)) / (p.rho(d) * p.rho(d));
}

/// Cov(df(x)/dx_d1, df(x2)/dx2_d2) = d^2 k / dx_d1 dx2_d2
///   = k(x, x2) [ delta_{d1,d2}/rho_d1^2 - (x_d1 - x2_d1)(x_d2 - x2_d2)/(rho_d1^2 rho_d2^2) ].
inline Scalar k_grad_grad(const SeKernelParams& p, const Vector& x, const Vector& x2, int d1, int d2) {
    check_kernel_dims(p, x, x2);
    require(d1 >= 0 && d1 < p.dim() && d2 >= 0 && d2 < p.dim(),
            "k_grad_grad: coordinate index out of range");
    const Scalar r1 = (x(d1) - x2(d1)) / (p.rho(d1) * p.rho(d1));
    const Scalar r2 = (x(d2) - x2(d2)) / (p.rho(d2) * p.rho(d2));
    const Scalar kron = d1 == d2 ? 1.0 / (p.rho(d1) * p.rho(d1)) : 0.0;
    return k_value(p, x, x2) * (kron - r1 * r2);
}

/// Gram matrix of k_value over the rows of X and X2.
inline Matrix kernel_matrix(const SeKernelParams& p, const PointSet& X, const PointSet& X2) {
    Matrix K(X.rows(), X2.rows());
    for (int i = 0; i < X.rows(); ++i)
        for (int j = 0; j < X2.rows(); ++j)
            K(i, j) = k_value(p, X.row(i).transpose(), X2.row(j).transpose());
    return K;
}

inline Matrix kernel_matrix(const SeKernelParams& p, const PointSet& X) {
    Matrix K(X.rows(), X.rows());
    for (int i = 0; i < X.rows(); ++i) {
        for (int j = 0; j <= i; ++j) {
            K(i, j) = k_value(p, X.row(i).transpose(), X.row(j).transpose());
            K(j, i) = K(i, j);
        }
    }
    return K;
}

}  // namespace pareto
