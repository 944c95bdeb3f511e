#include "pareto/conditions.hpp"

#include "pareto/dominance.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace pareto {

namespace {

// Central-difference stencils for the k-th derivative, O(h^2) accurate.
// Offsets are symmetric around 0; divide by h^k.
struct Stencil {
    std::vector<int> offsets;
    std::vector<Scalar> coeffs;
    Scalar base_step;
};

const Stencil& stencil_for(int k) {
    static const std::vector<Stencil> table = {
        {{-1, 1}, {-0.5, 0.5}, 1e-3},                                          // k = 1
        {{-1, 0, 1}, {1, -2, 1}, 2e-3},                                        // k = 2
        {{-2, -1, 1, 2}, {-0.5, 1, -1, 0.5}, 1e-2},                            // k = 3
        {{-2, -1, 0, 1, 2}, {1, -4, 6, -4, 1}, 2e-2},                          // k = 4
        {{-3, -2, -1, 1, 2, 3}, {-0.5, 2, -2.5, 2.5, -2, 0.5}, 5e-2},          // k = 5
        {{-3, -2, -1, 0, 1, 2, 3}, {1, -6, 15, -20, 15, -6, 1}, 1e-1},         // k = 6
    };
    return table[static_cast<size_t>(k - 1)];
}

Scalar stencil_estimate(const std::function<Scalar(Scalar)>& h, int k, Scalar step) {
    const Stencil& s = stencil_for(k);
    Scalar acc = 0.0;
    for (size_t i = 0; i < s.offsets.size(); ++i) {
        const Scalar v = h(step * s.offsets[i]);
        if (!std::isfinite(v))
            throw std::runtime_error("generalized_gradient: function not evaluable near 0");
        acc += s.coeffs[i] * v;
    }
    return acc / std::pow(step, k);
}

// Two Richardson levels cancel the h^2 and h^4 error terms.
Scalar refined_derivative(const std::function<Scalar(Scalar)>& h, int k) {
    const Scalar step = stencil_for(k).base_step;
    const Scalar d1 = stencil_estimate(h, k, step);
    const Scalar d2 = stencil_estimate(h, k, step / 2);
    const Scalar d3 = stencil_estimate(h, k, step / 4);
    const Scalar r1 = (4.0 * d2 - d1) / 3.0;
    const Scalar r2 = (4.0 * d3 - d2) / 3.0;
    return (16.0 * r2 - r1) / 15.0;
}

Scalar factorial(int k) {
    Scalar f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

GeneralizedGradientResult generalized_gradient(const std::function<Scalar(Scalar)>& h, int max_order,
                                               Scalar deriv_zero_tol) {
    require(max_order >= 1 && max_order <= 6, "generalized_gradient: max_order must be in [1, 6]");
    const Scalar h0 = h(0.0);
    if (!std::isfinite(h0))
        throw std::runtime_error("generalized_gradient: function not evaluable near 0");

    GeneralizedGradientResult res;
    for (int k = 1; k <= max_order; ++k) {
        const Scalar d = refined_derivative(h, k);
        if (std::abs(d) > deriv_zero_tol) {
            res.kind = GeneralizedGradientResult::Kind::defined;
            res.order = k;
            res.value = d / factorial(k);
            res.even_order_flag = k % 2 == 0;
            return res;
        }
    }
    // No order responded: constant function or derivative order beyond reach.
    bool constant = true;
    for (int i = -6; i <= 6 && constant; ++i)
        constant = std::abs(h(0.05 * i) - h0) <= deriv_zero_tol * (1.0 + std::abs(h0));
    res.kind = constant ? GeneralizedGradientResult::Kind::constant
                        : GeneralizedGradientResult::Kind::undefined;
    res.value = 0.0;
    return res;
}

std::vector<Vector> default_directions(int m) {
    std::vector<Vector> dirs;
    dirs.push_back(Vector::Ones(m));
    for (int d = 0; d < m; ++d) {
        Vector u = Vector::Constant(m, 1e-3);  // (0,1]^M is open: no pure axis vectors
        u(d) = 1.0;
        dirs.push_back(u);
    }
    return dirs;
}

namespace {

struct AuditContext {
    std::vector<Vector> base_dirs;
    std::mt19937_64 rng;
    std::uniform_real_distribution<Scalar> unit{std::nextafter(0.0, 1.0), 1.0};

    explicit AuditContext(const AuditConfig& cfg, int m) : rng(cfg.seed) {
        base_dirs = cfg.directions.empty() ? default_directions(m) : cfg.directions;
    }

    std::vector<Vector> directions_for_sample(int m, int n_random) {
        std::vector<Vector> dirs = base_dirs;
        for (int r = 0; r < n_random; ++r) {
            Vector u(m);
            for (int d = 0; d < m; ++d) u(d) = unit(rng);
            dirs.push_back(u);
        }
        return dirs;
    }
};

void settle_verdict(ValidityReport* rep, const FrontierEstimate* frontier) {
    if (frontier != nullptr)
        rep->connectivity =
            frontier->component_count == 1 ? ConnectivityStatus::ok : ConnectivityStatus::failed;
    if (rep->samples.empty()) {
        rep->verdict = Verdict::inconclusive;
        return;
    }
    if (rep->failures() > 0 || rep->connectivity == ConnectivityStatus::failed)
        rep->verdict = Verdict::violated;
    else
        rep->verdict = Verdict::valid;
}

Scalar eval_checked(const ScoreFunction& f, const Vector& y) {
    const Scalar v = f.value(y);
    if (!std::isfinite(v)) throw std::runtime_error("audit: score function returned non-finite value");
    return v;
}

Vector gradient_or_fd(const ScoreFunction& f, const Vector& y) {
    if (f.has_gradient()) return f.gradient(y);
    const Scalar step = 1e-6;
    Vector g(y.size());
    for (int d = 0; d < y.size(); ++d) {
        Vector yp = y, ym = y;
        yp(d) += step;
        ym(d) -= step;
        g(d) = (eval_checked(f, yp) - eval_checked(f, ym)) / (2.0 * step);
    }
    if (!g.allFinite()) throw std::runtime_error("audit: non-finite gradient");
    return g;
}

}  // namespace

ValidityReport check_score_function(const ScoreFunction& f, const PointSet& frontier_samples,
                                    const AuditConfig& config, const FrontierEstimate* frontier) {
    const int m = static_cast<int>(frontier_samples.cols());
    AuditContext ctx(config, m);
    ValidityReport rep;
    for (int i = 0; i < frontier_samples.rows(); ++i) {
        const Vector y = frontier_samples.row(i).transpose();
        if (std::abs(eval_checked(f, y)) > config.frontier_tol) {
            ++rep.rejected_samples;
            continue;
        }
        for (const Vector& u : ctx.directions_for_sample(m, config.random_directions)) {
            for (const Scalar delta : config.deltas) {
                AuditRow row;
                row.point = y;
                row.direction = u;
                row.delta = delta;
                row.f_plus = eval_checked(f, y + delta * u);
                row.f_minus = eval_checked(f, y - delta * u);
                row.pass = row.f_plus > 0 && row.f_minus < 0;
                if (!row.pass) {
                    if (row.f_plus <= 0) rep.max_violation = std::max(rep.max_violation, -row.f_plus);
                    if (row.f_minus >= 0) rep.max_violation = std::max(rep.max_violation, row.f_minus);
                }
                rep.samples.push_back(std::move(row));
            }
        }
    }
    settle_verdict(&rep, frontier);
    return rep;
}

ValidityReport check_differentiable(const ScoreFunction& f, const PointSet& frontier_samples,
                                    const AuditConfig& config, const FrontierEstimate* frontier) {
    const int m = static_cast<int>(frontier_samples.cols());
    AuditContext ctx(config, m);
    ValidityReport rep;
    for (int i = 0; i < frontier_samples.rows(); ++i) {
        const Vector y = frontier_samples.row(i).transpose();
        if (std::abs(eval_checked(f, y)) > config.frontier_tol) {
            ++rep.rejected_samples;
            continue;
        }
        const Vector grad = gradient_or_fd(f, y);
        for (const Vector& u : ctx.directions_for_sample(m, config.random_directions)) {
            AuditRow row;
            row.point = y;
            row.direction = u;
            const Scalar du = grad.dot(u);
            if (std::abs(du) > config.grad_zero_tol) {
                row.f_plus = du;
                row.f_minus = -du;
                row.pass = du > 0;
            } else {
                // First derivative vanished: inspect the 1D slices with the
                // generalized gradient; an even leading order cannot give
                // opposite signs to opposite directions.
                const auto fwd = generalized_gradient(
                    [&](Scalar x) { return eval_checked(f, y + x * u); }, config.max_order,
                    config.deriv_zero_tol);
                const auto bwd = generalized_gradient(
                    [&](Scalar x) { return eval_checked(f, y - x * u); }, config.max_order,
                    config.deriv_zero_tol);
                row.f_plus = fwd.value;
                row.f_minus = bwd.value;
                row.pass = fwd.kind == GeneralizedGradientResult::Kind::defined &&
                           bwd.kind == GeneralizedGradientResult::Kind::defined &&
                           !fwd.even_order_flag && fwd.value > 0 && bwd.value < 0;
            }
            if (!row.pass) {
                if (row.f_plus <= 0) rep.max_violation = std::max(rep.max_violation, -row.f_plus);
                if (row.f_minus >= 0) rep.max_violation = std::max(rep.max_violation, row.f_minus);
            }
            rep.samples.push_back(std::move(row));
        }
    }
    settle_verdict(&rep, frontier);
    return rep;
}

IncreasingResult check_coordinatewise_increasing(const ScoreFunction& f, const Box& region,
                                                 int grid_n) {
    require(grid_n >= 2, "check_coordinatewise_increasing: grid_n must be >= 2");
    const int m = region.dim();
    require((region.hi.array() > region.lo.array()).all(),
            "check_coordinatewise_increasing: degenerate box");

    const auto grid_point = [&](const std::vector<int>& idx) {
        Vector y(m);
        for (int d = 0; d < m; ++d)
            y(d) = region.lo(d) + (region.hi(d) - region.lo(d)) * idx[d] / (grid_n - 1);
        return y;
    };

    IncreasingResult res;
    res.increasing = true;
    std::vector<int> idx(static_cast<size_t>(m), 0);
    const auto total_lines = [&]() {
        long t = 1;
        for (int d = 0; d < m - 1; ++d) t *= grid_n;
        return t;
    }();
    for (int axis = 0; axis < m; ++axis) {
        for (long line = 0; line < total_lines; ++line) {
            long rem = line;
            for (int d = 0; d < m; ++d) {
                if (d == axis) continue;
                idx[static_cast<size_t>(d)] = static_cast<int>(rem % grid_n);
                rem /= grid_n;
            }
            Scalar prev = 0;
            Vector prev_pt;
            for (int step = 0; step < grid_n; ++step) {
                idx[static_cast<size_t>(axis)] = step;
                const Vector y = grid_point(idx);
                const Scalar v = eval_checked(f, y);
                if (step > 0 && !(v > prev)) {
                    res.increasing = false;
                    res.witness_a = prev_pt;
                    res.witness_b = y;
                    return res;
                }
                prev = v;
                prev_pt = y;
            }
        }
    }
    return res;
}

SignPartitionResult check_sign_partition(const ScoreFunction& f, const FrontierEstimate& frontier,
                                         const PointSet& probes, Scalar band_tol) {
    require(!frontier.empty(), "check_sign_partition: empty frontier estimate");
    if (band_tol < 0) band_tol = frontier.cell_diagonal();
    const std::vector<Vector> samples = densify(frontier, frontier.cell_diagonal() / 4.0);

    SignPartitionResult res;
    std::vector<std::pair<Vector, Scalar>> negatives;  // candidates for the witness pair
    std::vector<std::pair<Vector, Scalar>> positives;
    for (int i = 0; i < probes.rows(); ++i) {
        const Vector p = probes.row(i).transpose();
        Scalar dist = std::numeric_limits<Scalar>::infinity();
        bool dominated = false, dominating = false;
        for (const Vector& s : samples) {
            dist = std::min(dist, (p - s).norm());
            dominated = dominated || dominates_strong(s, p);
            dominating = dominating || dominates_strong(p, s);
        }
        if (dist <= band_tol) {
            ++res.excluded_near_frontier;
            continue;
        }
        if (!dominated && !dominating) {
            ++res.unclassified;
            continue;
        }
        const Scalar v = eval_checked(f, p);
        ++res.checked;
        // A probe both dominated by and dominating samples means the sample
        // set itself violates strong-dominance freedom; count it against the
        // dominated side, where the sign convention requires f > 0.
        const bool expect_positive = dominated;
        if ((expect_positive && !(v > 0)) || (!expect_positive && !(v < 0))) ++res.mismatches;
        if (v > 0) positives.emplace_back(p, v);
        if (v < 0) negatives.emplace_back(p, v);
    }
    for (const auto& [vp, fp] : positives) {
        for (const auto& [vn, fn] : negatives) {
            if (dominates_strong(vn, vp)) {
                res.witness_found = true;
                break;
            }
        }
        if (res.witness_found) break;
    }
    res.ok = res.checked > 0 && res.mismatches == 0 && res.witness_found;
    return res;
}

}  // namespace pareto
