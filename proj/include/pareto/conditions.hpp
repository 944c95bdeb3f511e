#pragma once

#include "pareto/levelset.hpp"
#include "pareto/types.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace pareto {

// ============================================================================
// Numerical audits of the necessary-and-sufficient score-function conditions
// ============================================================================
//
// A "valid" verdict means no violation was found at the audit resolution; the
// quantifiers over all directions and step sizes cannot be checked
// exhaustively, so the audit is a sound refuter but an incomplete verifier.

/// Delta(h): first non-zero derivative of h at 0 divided by k*!, estimated by
/// central differences with Richardson refinement.
struct GeneralizedGradientResult {
    enum class Kind { defined, constant, undefined };
    Kind kind = Kind::undefined;
    Scalar value = 0.0;  // Delta(h); 0 for a constant h
    int order = 0;       // k* when defined
    bool even_order_flag = false;
};

GeneralizedGradientResult generalized_gradient(const std::function<Scalar(Scalar)>& h,
                                               int max_order = 6, Scalar deriv_zero_tol = 1e-6);

enum class Verdict { valid, violated, inconclusive };
enum class ConnectivityStatus { ok, failed, unchecked };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::valid: return "valid";
        case Verdict::violated: return "violated";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

inline const char* to_string(ConnectivityStatus c) {
    switch (c) {
        case ConnectivityStatus::ok: return "ok";
        case ConnectivityStatus::failed: return "failed";
        case ConnectivityStatus::unchecked: return "unchecked";
    }
    return "?";
}

struct AuditRow {
    Vector point;
    Vector direction;
    Scalar delta = 0.0;    // step size; 0 for derivative-based rows
    Scalar f_plus = 0.0;   // f(y + delta u), or Delta(f+) for derivative rows
    Scalar f_minus = 0.0;  // f(y - delta u), or Delta(f-)
    bool pass = false;
};

struct ValidityReport {
    std::vector<AuditRow> samples;
    Scalar max_violation = 0.0;  // largest wrong-signed |f| over failing rows
    int rejected_samples = 0;    // frontier samples with |f| > frontier_tol
    ConnectivityStatus connectivity = ConnectivityStatus::unchecked;
    Verdict verdict = Verdict::inconclusive;

    [[nodiscard]] bool connectivity_ok() const { return connectivity != ConnectivityStatus::failed; }
    [[nodiscard]] int failures() const {
        int n = 0;
        for (const auto& r : samples) n += r.pass ? 0 : 1;
        return n;
    }
};

struct AuditConfig {
    std::vector<Vector> directions;         // empty: default set (see below)
    std::vector<Scalar> deltas = {1e-3, 1e-2, 1e-1, 1.0};
    int random_directions = 8;              // per sample, seeded
    std::uint64_t seed = 0;
    Scalar frontier_tol = 1e-3;
    Scalar grad_zero_tol = 1e-6;
    Scalar deriv_zero_tol = 1e-6;
    int max_order = 6;
};

/// Default audit directions for dimension m: the all-ones vector plus the m
/// near-axis vectors (1 in one coordinate, 1e-3 elsewhere).
[[nodiscard]] std::vector<Vector> default_directions(int m);

/// Checks f(y + delta u) > 0 and f(y - delta u) < 0 on every sample/direction/
/// delta triple. Samples with |f(y)| > frontier_tol are rejected and reported.
/// When a frontier estimate is supplied its component count settles the
/// connectivity status; otherwise the status stays unchecked.
ValidityReport check_score_function(const ScoreFunction& f, const PointSet& frontier_samples,
                                    const AuditConfig& config = {},
                                    const FrontierEstimate* frontier = nullptr);

/// Directional-derivative version: passes when grad f(y) . u > grad_zero_tol;
/// near-zero derivatives escalate to the generalized gradient along the 1D
/// slice, where an even k* fails.
ValidityReport check_differentiable(const ScoreFunction& f, const PointSet& frontier_samples,
                                    const AuditConfig& config = {},
                                    const FrontierEstimate* frontier = nullptr);

/// Verifies f strictly increases along every grid line in every coordinate.
struct IncreasingResult {
    bool increasing = false;
    Vector witness_a;  // f(witness_a) >= f(witness_b) with witness_a before witness_b
    Vector witness_b;
};
IncreasingResult check_coordinatewise_increasing(const ScoreFunction& f, const Box& region,
                                                 int grid_n);

/// Classifies probes by brute-force dominance against densified frontier
/// samples and checks that sign(f) matches (+ on the dominated side, - on the
/// non-dominated side). Probes within band_tol of the frontier are excluded
/// (band_tol < 0: one grid cell diagonal). Also requires a witness pair with
/// v- strongly dominating v+ and f(v-) < 0 < f(v+).
struct SignPartitionResult {
    bool ok = false;
    int checked = 0;
    int excluded_near_frontier = 0;
    int unclassified = 0;
    int mismatches = 0;
    bool witness_found = false;
};
SignPartitionResult check_sign_partition(const ScoreFunction& f, const FrontierEstimate& frontier,
                                         const PointSet& probes, Scalar band_tol = -1.0);

}  // namespace pareto
