#pragma once

#include "pareto/types.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <string>

namespace pareto {

/// Cholesky of a symmetric PSD matrix with escalating diagonal jitter
/// (0, 1e-9, 1e-6, 1e-3). Throws with the smallest eigenvalue if every
/// attempt fails. Writes the jitter actually applied to *jitter_used.
inline Eigen::LLT<Matrix> psd_cholesky(const Matrix& A, Scalar* jitter_used = nullptr) {
    static constexpr Scalar kJitters[] = {0.0, 1e-9, 1e-6, 1e-3};
    for (Scalar j : kJitters) {
        Matrix B = A;
        if (j > 0) B.diagonal().array() += j;
        Eigen::LLT<Matrix> llt(B);
        if (llt.info() == Eigen::Success) {
            if (jitter_used) *jitter_used = j;
            return llt;
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(A, Eigen::EigenvaluesOnly);
    throw std::runtime_error("psd_cholesky: matrix not PSD after jitter escalation (min eigenvalue " +
                             std::to_string(es.eigenvalues().minCoeff()) + ")");
}

inline Scalar log_det_from_llt(const Eigen::LLT<Matrix>& llt) {
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace pareto
