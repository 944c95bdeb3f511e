#pragma once

#include <cmath>

namespace pareto {

inline constexpr double kLog2Pi = 1.8378770664093454836;

inline double norm_pdf(double v) { return std::exp(-0.5 * v * v - 0.5 * kLog2Pi); }

inline double log_norm_pdf(double v) { return -0.5 * v * v - 0.5 * kLog2Pi; }

/// Standard normal CDF (the probit soft-constraint function).
/// erfc-based so the lower tail stays positive far below v = -8.
inline double probit(double v) { return 0.5 * std::erfc(-v * 0.70710678118654752440); }

/// log Phi(v), stable in the far lower tail where Phi underflows.
inline double log_norm_cdf(double v) {
    if (v > -8.0) return std::log(probit(v));
    // Asymptotic expansion: Phi(v) ~ phi(v)/(-v) (1 - 1/v^2 + 3/v^4 - 15/v^6).
    const double v2 = v * v;
    const double series = 1.0 - 1.0 / v2 + 3.0 / (v2 * v2) - 15.0 / (v2 * v2 * v2);
    return log_norm_pdf(v) - std::log(-v) + std::log(series);
}

/// N(v)/Phi(v), the inverse Mills ratio; log-domain in the lower tail.
inline double norm_pdf_over_cdf(double v) {
    if (v > -8.0) return norm_pdf(v) / probit(v);
    return std::exp(log_norm_pdf(v) - log_norm_cdf(v));
}

}  // namespace pareto
