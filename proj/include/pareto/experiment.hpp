#pragma once

#include "pareto/conditions.hpp"
#include "pareto/dominance.hpp"
#include "pareto/gp.hpp"
#include "pareto/levelset.hpp"
#include "pareto/monotonic_gp.hpp"
#include "pareto/ocsvm.hpp"
#include "pareto/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pareto {

// ============================================================================
// Experiment harness: builtin test problems, end-to-end runs, comparisons
// ============================================================================

struct TestProblem {
    std::string name;
    enum class Kind { point_list, analytic } kind = Kind::point_list;
    PointSet frontier_points;                        // point_list: provided frontier samples
    std::vector<std::pair<Vector, Scalar>> anchors;  // (location, target)

    // analytic problems: two objectives over a boxed decision space
    std::function<Scalar(const Vector&)> objective1;
    std::function<Scalar(const Vector&)> objective2;
    Box decision_box;
    Scalar grid_step = 0.0;

    /// Objective-space image of the decision grid (analytic problems).
    [[nodiscard]] PointSet objective_grid() const;

    /// Frontier reference samples for the quality metrics: the provided points
    /// for point_list problems, the non-dominated grid points for analytic ones.
    [[nodiscard]] PointSet reference_points() const;
};

/// P1 (convex, eps = 1e-3, anchor (1,1) -> +1), P2 (concave, anchor (0,0) -> -1),
/// and the discontinuous-frontier analytic problem on a step-0.05 grid.
[[nodiscard]] std::vector<TestProblem> builtin_problems();
[[nodiscard]] TestProblem find_problem(const std::string& name);

enum class ModelKind { monotonic_gp, plain_gp, ocsvm, staircase };
[[nodiscard]] const char* to_string(ModelKind k);
[[nodiscard]] ModelKind model_kind_from_string(const std::string& s);

struct ExperimentConfig {
    std::string problem = "p2";
    ModelKind model = ModelKind::monotonic_gp;

    Scalar beta = std::numeric_limits<Scalar>::infinity();  // sigma^2 prior strength
    Scalar ig_alpha = 3.0;
    Scalar gamma = 6.0;      // SVM kernel width
    Scalar svm_nu = 1e-3;    // SVM outlier fraction
    Scalar probit_nu = 1e-6; // monotonicity sharpness

    std::uint64_t seed = 0;
    int grid_nx = 256;
    int grid_ny = 256;
    Scalar box_margin = 0.2;        // fraction of the data span added per side
    std::optional<Box> box;         // overrides the margin-derived box

    bool optimize = true;  // hyperparameter optimization for the GP models
    int restarts = 3;
    int max_opt_iters = 120;
    Scalar init_eta = 1.0;
    Scalar init_rho = 0.5;
    Scalar init_noise_var = 0.1;

    std::string output_dir;  // empty: keep results in memory only
    bool strict = false;     // audit-detected invalid frontier -> exit code 3
};

struct ExperimentResult {
    ExperimentConfig config;
    Box box;
    ScoreFunction score;
    FrontierEstimate frontier;
    Matrix grid_values;  // (nx+1) x (ny+1) score samples, row-major over y1

    ValidityReport score_audit;
    bool has_diff_audit = false;
    ValidityReport diff_audit;
    SignPartitionResult sign_partition;
    DepthResult violation;
    /// Symmetric Hausdorff between the frontier clipped to the training-data
    /// box and the reference samples; spurious frontier structure inside the
    /// data region counts against the model.
    Scalar hausdorff_to_reference = std::numeric_limits<Scalar>::quiet_NaN();
    /// Directed: max over reference samples of the distance to the extracted
    /// frontier; measures how closely the curve visits every sample.
    Scalar reference_to_frontier = std::numeric_limits<Scalar>::quiet_NaN();
    long long spurious_zero_cells = 0;  // |f| < 1e-2 nodes outside the 0.1 staircase band

    SeKernelParams fitted_params;  // GP models
    Scalar fitted_noise_var = 0.0;
    Scalar objective_value = std::numeric_limits<Scalar>::quiet_NaN();
    EpState ep;                    // monotonic GP
    Scalar svm_kkt_gap = 0.0;      // ocsvm
    int svm_support_vectors = 0;

    double runtime_seconds = 0.0;  // wall clock; not serialized into metrics.json
    int exit_code = 0;

    [[nodiscard]] bool audit_invalid() const {
        return score_audit.verdict == Verdict::violated || sign_partition.mismatches > 0 ||
               violation.depth > 0;
    }
};

/// Fits the configured model, extracts the zero set, runs the audits and, when
/// output_dir is set, writes frontier.csv, contour_grid.csv, validity.json,
/// metrics.json, config.json and model.json. Fit errors propagate with the
/// config echoed in the message.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct ComparisonRow {
    std::string label;
    ModelKind model = ModelKind::monotonic_gp;
    Scalar beta = 0, gamma = 0;
    Scalar hausdorff = 0;
    Scalar reference_to_frontier = 0;
    Scalar violation_depth = 0;
    bool sign_partition_ok = false;
    std::string audit_verdict;
    Scalar eta = 0, rho = 0, noise_var = 0;
    double runtime_seconds = 0;
};

/// One experiment per config, all on the same problem.
std::vector<ComparisonRow> compare_models(const std::vector<ExperimentConfig>& configs);
void write_comparison_csv(const std::vector<ComparisonRow>& rows, const std::string& path);
void write_comparison_json(const std::vector<ComparisonRow>& rows, const std::string& path);

// Artifact writers shared with the CLI.
void write_experiment_artifacts(const ExperimentResult& result);
std::string validity_json_text(const ExperimentResult& result);
std::string metrics_json_text(const ExperimentResult& result);
std::string config_json_text(const ExperimentConfig& config, const Box& box);

}  // namespace pareto
