#pragma once

#include "pareto/se_kernel.hpp"
#include "pareto/types.hpp"

#include <cmath>

namespace pareto::detail {

/// Packs kernel hyperparameters and the noise variance as
/// theta = (log eta, log rho [1 entry if tied, else M], log sigma^2).
struct ThetaMap {
    int dim = 0;
    bool tied = false;

    [[nodiscard]] int size() const { return tied ? 3 : dim + 2; }

    [[nodiscard]] Vector pack(const SeKernelParams& p, Scalar noise_var) const {
        Vector t(size());
        t(0) = std::log(p.eta);
        if (tied)
            t(1) = std::log(p.rho(0));
        else
            t.segment(1, dim) = p.rho.array().log();
        t(size() - 1) = std::log(std::max(noise_var, 1e-12));
        return t;
    }

    void unpack(const Vector& t, SeKernelParams* p, Scalar* noise_var) const {
        p->eta = std::exp(t(0));
        if (tied)
            p->rho = Vector::Constant(dim, std::exp(t(1)));
        else
            p->rho = t.segment(1, dim).array().exp();
        *noise_var = std::exp(t(t.size() - 1));
    }

    /// Collapses a full (log eta, log rho_1..M, log sigma^2) gradient onto the
    /// tied parameterization.
    [[nodiscard]] Vector collapse(const Vector& full) const {
        if (!tied) return full;
        Vector g(3);
        g(0) = full(0);
        g(1) = full.segment(1, dim).sum();
        g(2) = full(full.size() - 1);
        return g;
    }
};

}  // namespace pareto::detail
