#include "pareto/experiment.hpp"

#include "pareto/csv_io.hpp"
#include "pareto/json_out.hpp"
#include "pareto/model_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace pareto {

namespace {

constexpr Scalar kEps = 1e-3;  // sharp-corner offset of the builtin frontiers

Vector point2(Scalar a, Scalar b) {
    Vector v(2);
    v << a, b;
    return v;
}

}  // namespace

PointSet TestProblem::objective_grid() const {
    require(kind == Kind::analytic, "objective_grid: not an analytic problem");
    const int n1 = static_cast<int>(std::lround((decision_box.hi(0) - decision_box.lo(0)) / grid_step)) + 1;
    const int n2 = static_cast<int>(std::lround((decision_box.hi(1) - decision_box.lo(1)) / grid_step)) + 1;
    PointSet grid(n1 * n2, 2);
    int r = 0;
    for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n2; ++j) {
            Vector x(2);
            x << decision_box.lo(0) + i * grid_step, decision_box.lo(1) + j * grid_step;
            grid(r, 0) = objective1(x);
            grid(r, 1) = objective2(x);
            ++r;
        }
    }
    return grid;
}

PointSet TestProblem::reference_points() const {
    if (kind == Kind::point_list) return frontier_points;
    return non_dominated_filter(objective_grid());
}

std::vector<TestProblem> builtin_problems() {
    std::vector<TestProblem> problems;

    TestProblem p1;
    p1.name = "p1";
    p1.kind = TestProblem::Kind::point_list;
    p1.frontier_points.resize(3, 2);
    p1.frontier_points.row(0) = point2(0, 1).transpose();
    p1.frontier_points.row(1) = point2(kEps, kEps).transpose();
    p1.frontier_points.row(2) = point2(1, 0).transpose();
    p1.anchors.emplace_back(point2(1, 1), 1.0);
    problems.push_back(std::move(p1));

    TestProblem p2;
    p2.name = "p2";
    p2.kind = TestProblem::Kind::point_list;
    p2.frontier_points.resize(3, 2);
    p2.frontier_points.row(0) = point2(0, 1).transpose();
    p2.frontier_points.row(1) = point2(1 - kEps, 1 - kEps).transpose();
    p2.frontier_points.row(2) = point2(1, 0).transpose();
    p2.anchors.emplace_back(point2(0, 0), -1.0);
    problems.push_back(std::move(p2));

    TestProblem disc;
    disc.name = "discontinuous";
    disc.kind = TestProblem::Kind::analytic;
    disc.objective1 = [](const Vector& x) { return x(0); };
    disc.objective2 = [](const Vector& x) {
        return 1.0 + x(1) * x(1) - x(0) - 0.2 * std::sin(3.0 * M_PI * x(0));
    };
    disc.decision_box = Box{point2(0, -2), point2(1, 2)};
    disc.grid_step = 0.05;
    problems.push_back(std::move(disc));

    return problems;
}

TestProblem find_problem(const std::string& name) {
    for (auto& p : builtin_problems())
        if (p.name == name) return p;
    throw std::invalid_argument("unknown problem: " + name + " (try `problems` for the list)");
}

const char* to_string(ModelKind k) {
    switch (k) {
        case ModelKind::monotonic_gp: return "monotonic_gp";
        case ModelKind::plain_gp: return "plain_gp";
        case ModelKind::ocsvm: return "ocsvm";
        case ModelKind::staircase: return "staircase";
    }
    return "?";
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "monotonic_gp") return ModelKind::monotonic_gp;
    if (s == "plain_gp") return ModelKind::plain_gp;
    if (s == "ocsvm") return ModelKind::ocsvm;
    if (s == "staircase") return ModelKind::staircase;
    throw std::invalid_argument("unknown model kind: " + s);
}

namespace {

struct TrainingData {
    PointSet inputs;
    Vector targets;
};

// GP training set: frontier samples with target 0 plus the anchors; for the
// analytic problem, only the non-dominated grid points are required.
TrainingData gp_training_data(const TestProblem& p) {
    PointSet base = p.kind == TestProblem::Kind::point_list ? p.frontier_points
                                                            : non_dominated_filter(p.objective_grid());
    TrainingData data;
    const int n = static_cast<int>(base.rows());
    const int na = static_cast<int>(p.anchors.size());
    data.inputs.resize(n + na, base.cols());
    data.inputs.topRows(n) = base;
    data.targets = Vector::Zero(n + na);
    for (int a = 0; a < na; ++a) {
        data.inputs.row(n + a) = p.anchors[static_cast<size_t>(a)].first.transpose();
        data.targets(n + a) = p.anchors[static_cast<size_t>(a)].second;
    }
    return data;
}

// The SVM fits the raw sample cloud: the full grid for analytic problems.
PointSet svm_training_data(const TestProblem& p) {
    return p.kind == TestProblem::Kind::point_list ? p.frontier_points : p.objective_grid();
}

Box data_box(const PointSet& pts, Scalar margin_fraction) {
    Box b;
    b.lo = pts.colwise().minCoeff().transpose();
    b.hi = pts.colwise().maxCoeff().transpose();
    const Vector span = (b.hi - b.lo).cwiseMax(1e-6);
    b.lo -= margin_fraction * span;
    b.hi += margin_fraction * span;
    return b;
}

PointSet subsample_rows(const PointSet& s, int max_rows) {
    if (s.rows() <= max_rows) return s;
    PointSet out(max_rows, s.cols());
    for (int i = 0; i < max_rows; ++i) {
        const int idx = static_cast<int>((static_cast<long>(i) * (s.rows() - 1)) / (max_rows - 1));
        out.row(i) = s.row(idx);
    }
    return out;
}

std::string config_summary(const ExperimentConfig& c) {
    std::string s = "problem=" + c.problem + " model=" + to_string(c.model);
    if (c.model == ModelKind::monotonic_gp || c.model == ModelKind::plain_gp)
        s += " beta=" + format_float(c.beta);
    if (c.model == ModelKind::ocsvm) s += " gamma=" + format_float(c.gamma);
    s += " seed=" + std::to_string(c.seed);
    return s;
}

JsonOut validity_report_json(const ValidityReport& rep) {
    JsonOut j = JsonOut::object();
    j.set("verdict", to_string(rep.verdict));
    j.set("max_violation", rep.max_violation);
    j.set("connectivity", to_string(rep.connectivity));
    j.set("rejected_samples", rep.rejected_samples);
    j.set("rows", static_cast<int>(rep.samples.size()));
    j.set("failures", rep.failures());
    JsonOut rows = JsonOut::array();
    for (const auto& r : rep.samples) {
        JsonOut row = JsonOut::object();
        row.set("point", JsonOut::array(r.point));
        row.set("direction", JsonOut::array(r.direction));
        row.set("delta", r.delta);
        row.set("f_plus", r.f_plus);
        row.set("f_minus", r.f_minus);
        row.set("pass", r.pass);
        rows.push(std::move(row));
    }
    j.set("samples", std::move(rows));
    return j;
}

JsonOut sign_partition_json(const SignPartitionResult& sp) {
    JsonOut j = JsonOut::object();
    j.set("ok", sp.ok);
    j.set("checked", sp.checked);
    j.set("mismatches", sp.mismatches);
    j.set("excluded_near_frontier", sp.excluded_near_frontier);
    j.set("unclassified", sp.unclassified);
    j.set("witness_found", sp.witness_found);
    return j;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    const auto t_start = std::chrono::steady_clock::now();
    const TestProblem problem = find_problem(config.problem);

    ExperimentResult res;
    res.config = config;

    // ---- fit the configured model --------------------------------------
    PointSet box_source;
    try {
        switch (config.model) {
            case ModelKind::monotonic_gp: {
                const TrainingData data = gp_training_data(problem);
                const SeKernelParams init =
                    SeKernelParams::isotropic(config.init_eta, config.init_rho,
                                              static_cast<int>(data.inputs.cols()));
                MonotonicGpConfig mc;
                mc.nu = config.probit_nu;
                HyperOptConfig hyper;
                hyper.restarts = config.restarts;
                hyper.seed = config.seed;
                hyper.max_iters = config.max_opt_iters;
                hyper.tie_lengthscales = true;
                const MonotonicGpModel m = fit_with_noise_prior(
                    data.inputs, data.targets, constraints_on_all(data.inputs), init,
                    config.init_noise_var, config.ig_alpha, config.beta, config.optimize, mc, hyper);
                res.fitted_params = m.params;
                res.fitted_noise_var = m.noise_var;
                res.ep = m.ep;
                res.objective_value = ep_log_evidence(m) +
                                      (std::isfinite(config.beta)
                                           ? log_inverse_gamma(m.noise_var, config.ig_alpha, config.beta)
                                           : 0.0);
                res.score = m.score_function();
                box_source = data.inputs;
                if (!config.output_dir.empty()) {
                    std::filesystem::create_directories(config.output_dir);
                    save_monotonic_json(m, config.output_dir + "/model.json");
                }
                break;
            }
            case ModelKind::plain_gp: {
                const TrainingData data = gp_training_data(problem);
                const SeKernelParams init =
                    SeKernelParams::isotropic(config.init_eta, config.init_rho,
                                              static_cast<int>(data.inputs.cols()));
                HyperOptConfig hyper;
                hyper.restarts = config.restarts;
                hyper.seed = config.seed;
                hyper.max_iters = config.max_opt_iters;
                hyper.tie_lengthscales = true;
                hyper.ig_alpha = config.ig_alpha;
                hyper.ig_beta = config.beta;
                GpModel m = config.optimize
                                ? optimize_hyperparams(data.inputs, data.targets, init,
                                                       config.init_noise_var, hyper)
                                      .model
                                : fit_gp(data.inputs, data.targets, init, config.init_noise_var);
                res.fitted_params = m.params;
                res.fitted_noise_var = m.noise_var;
                res.objective_value = log_marginal_likelihood(m) +
                                      (std::isfinite(config.beta)
                                           ? log_inverse_gamma(m.noise_var, config.ig_alpha, config.beta)
                                           : 0.0);
                res.score = m.score_function();
                box_source = data.inputs;
                if (!config.output_dir.empty()) {
                    std::filesystem::create_directories(config.output_dir);
                    save_gp_json(m, config.output_dir + "/model.json");
                }
                break;
            }
            case ModelKind::ocsvm: {
                const PointSet data = svm_training_data(problem);
                const OneClassSvmModel m = train_ocsvm(data, config.svm_nu, config.gamma);
                res.svm_kkt_gap = m.kkt_gap;
                res.svm_support_vectors = static_cast<int>(m.support_points.rows());
                res.score = m.score_function();
                box_source = data;
                if (!config.output_dir.empty()) {
                    std::filesystem::create_directories(config.output_dir);
                    save_ocsvm_json(m, config.output_dir + "/model.json");
                }
                break;
            }
            case ModelKind::staircase: {
                const PointSet data = problem.kind == TestProblem::Kind::point_list
                                          ? problem.frontier_points
                                          : problem.objective_grid();
                const StaircaseFrontier m(data);
                res.score = m.score_function();
                box_source = data;
                if (!config.output_dir.empty()) {
                    std::filesystem::create_directories(config.output_dir);
                    save_staircase_json(m, config.output_dir + "/model.json");
                }
                break;
            }
        }
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("model fit failed [") + config_summary(config) +
                                 "]: " + e.what());
    }

    res.box = config.box ? *config.box : data_box(box_source, config.box_margin);

    // ---- level set + score grid ----------------------------------------
    res.frontier = extract_zero_set(res.score, res.box, config.grid_nx, config.grid_ny);
    res.grid_values.resize(config.grid_nx + 1, config.grid_ny + 1);
    {
        const Scalar dx = (res.box.hi(0) - res.box.lo(0)) / config.grid_nx;
        const Scalar dy = (res.box.hi(1) - res.box.lo(1)) / config.grid_ny;
        for (int i = 0; i <= config.grid_nx; ++i)
            for (int j = 0; j <= config.grid_ny; ++j)
                res.grid_values(i, j) = res.score.value(point2(res.box.lo(0) + i * dx,
                                                               res.box.lo(1) + j * dy));
    }

    // ---- audits ----------------------------------------------------------
    const PointSet reference = problem.reference_points();
    AuditConfig audit_cfg;
    audit_cfg.seed = config.seed;
    if (!res.frontier.empty()) {
        const PointSet samples = subsample_rows(res.frontier.vertices(), 120);
        res.score_audit = check_score_function(res.score, samples, audit_cfg, &res.frontier);
        if (res.score.has_gradient()) {
            res.has_diff_audit = true;
            res.diff_audit = check_differentiable(res.score, subsample_rows(samples, 60), audit_cfg,
                                                  &res.frontier);
        }
        const int pn = 30;
        PointSet probes(pn * pn, 2);
        for (int i = 0; i < pn; ++i)
            for (int j = 0; j < pn; ++j)
                probes.row(i * pn + j) =
                    point2(res.box.lo(0) + (res.box.hi(0) - res.box.lo(0)) * i / (pn - 1),
                           res.box.lo(1) + (res.box.hi(1) - res.box.lo(1)) * j / (pn - 1))
                        .transpose();
        res.sign_partition = check_sign_partition(res.score, res.frontier, probes);
        res.violation = dominance_violation_depth(res.frontier);
        // Symmetric fit quality over the training-data region: extrapolation
        // beyond the data is not penalized, spurious structure inside it is.
        Box data_bbox;
        data_bbox.lo = box_source.colwise().minCoeff().transpose();
        data_bbox.hi = box_source.colwise().maxCoeff().transpose();
        const FrontierEstimate clipped = clip_to_box(res.frontier, data_bbox);
        res.hausdorff_to_reference = clipped.empty()
                                         ? std::numeric_limits<Scalar>::infinity()
                                         : hausdorff(clipped, reference);
        // Directed coverage: every reference sample should be near the curve.
        {
            const auto dense = densify(res.frontier, res.frontier.cell_diagonal() / 4.0);
            Scalar worst = 0.0;
            for (int i = 0; i < reference.rows(); ++i) {
                Scalar best = std::numeric_limits<Scalar>::infinity();
                for (const auto& q : dense) best = std::min(best, (reference.row(i).transpose() - q).norm());
                worst = std::max(worst, best);
            }
            res.reference_to_frontier = worst;
        }
    } else {
        res.score_audit.verdict = Verdict::inconclusive;
        res.hausdorff_to_reference = std::numeric_limits<Scalar>::infinity();
        res.reference_to_frontier = std::numeric_limits<Scalar>::infinity();
    }

    // Near-zero cells far from the sample staircase: the "f(y) = 0 where no
    // frontier is" failure mode of the unconstrained GP.
    {
        const StaircaseFrontier staircase(reference);
        const Scalar dx = (res.box.hi(0) - res.box.lo(0)) / config.grid_nx;
        const Scalar dy = (res.box.hi(1) - res.box.lo(1)) / config.grid_ny;
        for (int i = 0; i <= config.grid_nx; ++i)
            for (int j = 0; j <= config.grid_ny; ++j) {
                const Vector y = point2(res.box.lo(0) + i * dx, res.box.lo(1) + j * dy);
                if (std::abs(res.grid_values(i, j)) < 1e-2 && std::abs(staircase.value(y)) > 0.1)
                    ++res.spurious_zero_cells;
            }
    }

    res.exit_code = config.strict && res.audit_invalid() ? 3 : 0;
    res.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    if (!config.output_dir.empty()) write_experiment_artifacts(res);
    return res;
}

std::string config_json_text(const ExperimentConfig& config, const Box& box) {
    JsonOut j = JsonOut::object();
    j.set("problem", config.problem);
    j.set("model", to_string(config.model));
    j.set("beta", config.beta);
    j.set("ig_alpha", config.ig_alpha);
    j.set("gamma", config.gamma);
    j.set("svm_nu", config.svm_nu);
    j.set("probit_nu", config.probit_nu);
    j.set("seed", static_cast<long long>(config.seed));
    JsonOut grid = JsonOut::object();
    grid.set("nx", config.grid_nx);
    grid.set("ny", config.grid_ny);
    j.set("grid", std::move(grid));
    j.set("box_margin", config.box_margin);
    JsonOut jbox = JsonOut::object();
    jbox.set("lo", JsonOut::array(box.lo));
    jbox.set("hi", JsonOut::array(box.hi));
    j.set("box", std::move(jbox));
    j.set("optimize", config.optimize);
    j.set("restarts", config.restarts);
    j.set("max_opt_iters", config.max_opt_iters);
    j.set("init_eta", config.init_eta);
    j.set("init_rho", config.init_rho);
    j.set("init_noise_var", config.init_noise_var);
    j.set("strict", config.strict);
    return j.dump();
}

std::string validity_json_text(const ExperimentResult& res) {
    JsonOut j = JsonOut::object();
    j.set("score_function", validity_report_json(res.score_audit));
    if (res.has_diff_audit) j.set("differentiable", validity_report_json(res.diff_audit));
    j.set("sign_partition", sign_partition_json(res.sign_partition));
    return j.dump();
}

std::string metrics_json_text(const ExperimentResult& res) {
    JsonOut j = JsonOut::object();
    j.set("problem", res.config.problem);
    j.set("model", to_string(res.config.model));
    if (res.config.model == ModelKind::monotonic_gp || res.config.model == ModelKind::plain_gp) {
        j.set("beta", res.config.beta);
        JsonOut hp = JsonOut::object();
        hp.set("eta", res.fitted_params.eta);
        hp.set("rho", JsonOut::array(res.fitted_params.rho));
        hp.set("noise_var", res.fitted_noise_var);
        j.set("hyperparams", std::move(hp));
        j.set("objective", res.objective_value);
    }
    if (res.config.model == ModelKind::monotonic_gp) {
        JsonOut ep = JsonOut::object();
        ep.set("converged", res.ep.converged);
        ep.set("iterations", res.ep.iterations);
        ep.set("skipped_updates", res.ep.skipped_updates);
        ep.set("final_max_delta", res.ep.final_max_delta);
        j.set("ep", std::move(ep));
    }
    if (res.config.model == ModelKind::ocsvm) {
        j.set("gamma", res.config.gamma);
        j.set("svm_nu", res.config.svm_nu);
        j.set("support_vectors", res.svm_support_vectors);
        j.set("kkt_gap", res.svm_kkt_gap);
    }
    JsonOut fr = JsonOut::object();
    fr.set("components", res.frontier.component_count);
    fr.set("vertices", res.frontier.vertex_count());
    fr.set("saddle_cells", res.frontier.saddle_cells);
    if (!res.frontier.diagnostic.empty()) fr.set("diagnostic", res.frontier.diagnostic);
    j.set("frontier", std::move(fr));
    j.set("dominance_violation_depth", res.violation.depth);
    if (res.violation.depth > 0) {
        JsonOut w = JsonOut::object();
        w.set("p", JsonOut::array(res.violation.witness_p));
        w.set("q", JsonOut::array(res.violation.witness_q));
        j.set("violation_witness", std::move(w));
    }
    j.set("hausdorff_to_reference", res.hausdorff_to_reference);
    j.set("reference_to_frontier", res.reference_to_frontier);
    j.set("spurious_zero_cells", static_cast<long long>(res.spurious_zero_cells));
    JsonOut audit = JsonOut::object();
    audit.set("verdict", to_string(res.score_audit.verdict));
    audit.set("max_violation", res.score_audit.max_violation);
    audit.set("failures", res.score_audit.failures());
    audit.set("rows", static_cast<int>(res.score_audit.samples.size()));
    audit.set("rejected_samples", res.score_audit.rejected_samples);
    audit.set("connectivity", to_string(res.score_audit.connectivity));
    j.set("audit", std::move(audit));
    if (res.has_diff_audit) {
        JsonOut audit2 = JsonOut::object();
        audit2.set("verdict", to_string(res.diff_audit.verdict));
        audit2.set("max_violation", res.diff_audit.max_violation);
        audit2.set("failures", res.diff_audit.failures());
        j.set("audit_differentiable", std::move(audit2));
    }
    j.set("sign_partition", sign_partition_json(res.sign_partition));
    return j.dump();
}

void write_experiment_artifacts(const ExperimentResult& res) {
    const std::string& dir = res.config.output_dir;
    std::filesystem::create_directories(dir);
    write_frontier_csv(res.frontier, dir + "/frontier.csv");
    write_contour_grid_csv(res.box, res.config.grid_nx, res.config.grid_ny, res.grid_values,
                           dir + "/contour_grid.csv");
    write_validity_csv(res.score_audit, dir + "/validity_summary.csv");
    const auto write_text = [&](const std::string& name, const std::string& text) {
        std::ofstream out(dir + "/" + name);
        if (!out) throw std::runtime_error("cannot write " + dir + "/" + name);
        out << text << "\n";
    };
    write_text("validity.json", validity_json_text(res));
    write_text("metrics.json", metrics_json_text(res));
    write_text("config.json", config_json_text(res.config, res.box));
}

std::vector<ComparisonRow> compare_models(const std::vector<ExperimentConfig>& configs) {
    require(configs.size() >= 2, "compare_models: need at least two configs");
    for (const auto& c : configs)
        require(c.problem == configs.front().problem, "compare_models: configs mix problems");

    std::vector<ComparisonRow> rows;
    for (const auto& c : configs) {
        const ExperimentResult r = run_experiment(c);
        ComparisonRow row;
        row.label = std::string(to_string(c.model)) +
                    (c.model == ModelKind::ocsvm ? " gamma=" + format_float(c.gamma)
                     : c.model == ModelKind::monotonic_gp || c.model == ModelKind::plain_gp
                         ? " beta=" + format_float(c.beta)
                         : "");
        row.model = c.model;
        row.beta = c.beta;
        row.gamma = c.gamma;
        row.hausdorff = r.hausdorff_to_reference;
        row.reference_to_frontier = r.reference_to_frontier;
        row.violation_depth = r.violation.depth;
        row.sign_partition_ok = r.sign_partition.ok;
        row.audit_verdict = to_string(r.score_audit.verdict);
        row.eta = r.fitted_params.rho.size() > 0 ? r.fitted_params.eta : 0.0;
        row.rho = r.fitted_params.rho.size() > 0 ? r.fitted_params.rho(0) : 0.0;
        row.noise_var = r.fitted_noise_var;
        row.runtime_seconds = r.runtime_seconds;
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_comparison_csv(const std::vector<ComparisonRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "label,model,beta,gamma,hausdorff,reference_to_frontier,violation_depth,"
           "sign_partition_ok,audit_verdict,eta,rho,noise_var,runtime_seconds\n";
    for (const auto& r : rows)
        out << r.label << "," << to_string(r.model) << "," << format_float(r.beta) << ","
            << format_float(r.gamma) << "," << format_float(r.hausdorff) << ","
            << format_float(r.reference_to_frontier) << ","
            << format_float(r.violation_depth) << "," << (r.sign_partition_ok ? 1 : 0) << ","
            << r.audit_verdict << "," << format_float(r.eta) << "," << format_float(r.rho) << ","
            << format_float(r.noise_var) << "," << format_float(r.runtime_seconds) << "\n";
}

void write_comparison_json(const std::vector<ComparisonRow>& rows, const std::string& path) {
    JsonOut arr = JsonOut::array();
    for (const auto& r : rows) {
        JsonOut row = JsonOut::object();
        row.set("label", r.label);
        row.set("model", to_string(r.model));
        row.set("beta", r.beta);
        row.set("gamma", r.gamma);
        row.set("hausdorff", r.hausdorff);
        row.set("reference_to_frontier", r.reference_to_frontier);
        row.set("violation_depth", r.violation_depth);
        row.set("sign_partition_ok", r.sign_partition_ok);
        row.set("audit_verdict", r.audit_verdict);
        row.set("eta", r.eta);
        row.set("rho", r.rho);
        row.set("noise_var", r.noise_var);
        row.set("runtime_seconds", r.runtime_seconds);
        arr.push(std::move(row));
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << arr.dump() << "\n";
}

}  // namespace pareto
