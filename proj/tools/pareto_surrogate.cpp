// Command-line front end: fit surrogate score functions on the builtin
// problems, extract zero level sets, audit score functions against the
// frontier validity conditions, and compare models.

#include "pareto/csv_io.hpp"
#include "pareto/experiment.hpp"
#include "pareto/json_out.hpp"
#include "pareto/model_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace pareto;

Scalar parse_beta(const std::string& s) {
    if (s == "inf" || s == "Inf" || s == "INF") return std::numeric_limits<Scalar>::infinity();
    const Scalar v = std::stod(s);
    // beta = 0 is the exact no-noise limit, which is numerically hostile;
    // floor it and say so.
    if (v <= 0) {
        std::cerr << "note: beta <= 0 floored to 1e-3 (exact zero causes numeric problems)\n";
        return 1e-3;
    }
    return v;
}

std::pair<int, int> parse_grid(const std::string& s) {
    const auto x = s.find('x');
    if (x == std::string::npos) throw CLI::ValidationError("--grid expects NXxNY, e.g. 256x256");
    return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
}

void apply_config_file(const std::string& path, ExperimentConfig* cfg) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    const nlohmann::json j = nlohmann::json::parse(in);
    if (j.contains("problem")) cfg->problem = j["problem"].get<std::string>();
    if (j.contains("model")) cfg->model = model_kind_from_string(j["model"].get<std::string>());
    if (j.contains("beta"))
        cfg->beta = j["beta"].is_string() ? parse_beta(j["beta"].get<std::string>())
                                          : j["beta"].get<Scalar>();
    if (j.contains("gamma")) cfg->gamma = j["gamma"].get<Scalar>();
    if (j.contains("svm_nu")) cfg->svm_nu = j["svm_nu"].get<Scalar>();
    if (j.contains("probit_nu")) cfg->probit_nu = j["probit_nu"].get<Scalar>();
    if (j.contains("seed")) cfg->seed = j["seed"].get<std::uint64_t>();
    if (j.contains("grid")) {
        cfg->grid_nx = j["grid"]["nx"].get<int>();
        cfg->grid_ny = j["grid"]["ny"].get<int>();
    }
    if (j.contains("box_margin")) cfg->box_margin = j["box_margin"].get<Scalar>();
    if (j.contains("optimize")) cfg->optimize = j["optimize"].get<bool>();
    if (j.contains("restarts")) cfg->restarts = j["restarts"].get<int>();
    if (j.contains("max_opt_iters")) cfg->max_opt_iters = j["max_opt_iters"].get<int>();
    if (j.contains("strict")) cfg->strict = j["strict"].get<bool>();
}

int cmd_problems(bool as_json) {
    const auto problems = builtin_problems();
    if (as_json) {
        JsonOut arr = JsonOut::array();
        for (const auto& p : problems) {
            JsonOut jp = JsonOut::object();
            jp.set("name", p.name);
            jp.set("kind", p.kind == TestProblem::Kind::point_list ? "point_list" : "analytic");
            if (p.kind == TestProblem::Kind::point_list) {
                JsonOut pts = JsonOut::array();
                for (int i = 0; i < p.frontier_points.rows(); ++i)
                    pts.push(JsonOut::array(p.frontier_points.row(i).transpose()));
                jp.set("frontier_points", std::move(pts));
                JsonOut anchors = JsonOut::array();
                for (const auto& [pt, target] : p.anchors) {
                    JsonOut a = JsonOut::object();
                    a.set("point", JsonOut::array(pt));
                    a.set("target", target);
                    anchors.push(std::move(a));
                }
                jp.set("anchors", std::move(anchors));
            } else {
                jp.set("grid_step", p.grid_step);
                jp.set("grid_points", static_cast<int>(p.objective_grid().rows()));
            }
            arr.push(std::move(jp));
        }
        std::cout << arr.dump() << "\n";
    } else {
        for (const auto& p : problems) {
            std::cout << p.name << ": "
                      << (p.kind == TestProblem::Kind::point_list ? "point list" : "analytic");
            if (p.kind == TestProblem::Kind::point_list)
                std::cout << ", " << p.frontier_points.rows() << " frontier points, "
                          << p.anchors.size() << " anchor(s)";
            else
                std::cout << ", grid step " << p.grid_step << " ("
                          << p.objective_grid().rows() << " points)";
            std::cout << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pareto-frontier surrogate toolkit"};
    app.require_subcommand(1);

    // ---- problems -------------------------------------------------------
    auto* sub_problems = app.add_subcommand("problems", "List the builtin test problems");
    bool problems_json = false;
    sub_problems->add_flag("--json", problems_json, "Emit JSON");

    // ---- fit --------------------------------------------------------------
    auto* sub_fit = app.add_subcommand(
        "fit", "Fit a model, extract its frontier, audit it, and write the artifact bundle");
    ExperimentConfig cfg;
    std::string fit_problem = "p2", fit_model = "monotonic_gp", fit_beta, fit_grid, fit_config;
    sub_fit->add_option("--problem", fit_problem, "Builtin problem name")->capture_default_str();
    sub_fit->add_option("--model", fit_model, "monotonic_gp|plain_gp|ocsvm|staircase")
        ->capture_default_str();
    sub_fit->add_option("--beta", fit_beta, "Inverse-gamma prior strength for sigma^2, or 'inf'");
    sub_fit->add_option("--gamma", cfg.gamma, "RBF width for the SVM");
    sub_fit->add_option("--svm-nu", cfg.svm_nu, "One-class SVM nu");
    sub_fit->add_option("--seed", cfg.seed, "RNG seed (restarts, audits)");
    sub_fit->add_option("--grid", fit_grid, "Extraction grid, e.g. 256x256");
    sub_fit->add_option("--out", cfg.output_dir, "Output directory for artifacts");
    sub_fit->add_option("--restarts", cfg.restarts, "Hyperparameter optimization restarts");
    sub_fit->add_option("--max-opt-iters", cfg.max_opt_iters, "Ascent iteration cap");
    sub_fit->add_option("--config", fit_config, "Config JSON file (flags override it)");
    sub_fit->add_flag("--strict", cfg.strict, "Exit 3 when the audit detects an invalid frontier");
    bool no_optimize = false;
    sub_fit->add_flag("--no-optimize", no_optimize, "Keep the initial hyperparameters");

    // ---- levelset ---------------------------------------------------------
    auto* sub_level = app.add_subcommand("levelset", "Extract the zero set of a saved model");
    std::string lv_model, lv_out = ".", lv_grid = "256x256", lv_box;
    sub_level->add_option("--model-file", lv_model, "model.json from a fit")->required();
    sub_level->add_option("--grid", lv_grid, "e.g. 256x256")->capture_default_str();
    sub_level->add_option("--box", lv_box, "x0,y0,x1,y1 extraction box")->required();
    sub_level->add_option("--out", lv_out, "Output directory")->capture_default_str();

    // ---- audit ------------------------------------------------------------
    auto* sub_audit = app.add_subcommand("audit", "Audit a saved model against the conditions");
    std::string au_model, au_samples, au_frontier, au_out = ".";
    std::uint64_t au_seed = 0;
    sub_audit->add_option("--model-file", au_model, "model.json from a fit")->required();
    sub_audit->add_option("--samples", au_samples, "CSV of frontier samples to audit");
    sub_audit->add_option("--frontier", au_frontier, "frontier.csv whose vertices to audit");
    sub_audit->add_option("--seed", au_seed, "RNG seed for random audit directions");
    sub_audit->add_option("--out", au_out, "Output directory")->capture_default_str();

    // ---- compare -----------------------------------------------------------
    auto* sub_compare = app.add_subcommand("compare", "Run several configs on one problem");
    std::string cp_problem = "discontinuous", cp_out = ".";
    std::vector<std::string> cp_specs;
    std::uint64_t cp_seed = 0;
    sub_compare->add_option("--problem", cp_problem, "Builtin problem name")->capture_default_str();
    sub_compare->add_option("--spec", cp_specs,
                            "Repeatable model spec, e.g. model=ocsvm,gamma=5 or "
                            "model=monotonic_gp,beta=0.1")
        ->required();
    sub_compare->add_option("--seed", cp_seed, "RNG seed");
    sub_compare->add_option("--out", cp_out, "Output directory")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sub_problems) return cmd_problems(problems_json);

        if (*sub_fit) {
            if (!fit_config.empty()) apply_config_file(fit_config, &cfg);
            if (sub_fit->count("--problem") || fit_config.empty()) cfg.problem = fit_problem;
            if (sub_fit->count("--model") || fit_config.empty())
                cfg.model = model_kind_from_string(fit_model);
            if (!fit_beta.empty()) cfg.beta = parse_beta(fit_beta);
            if (!fit_grid.empty()) std::tie(cfg.grid_nx, cfg.grid_ny) = parse_grid(fit_grid);
            if (no_optimize) cfg.optimize = false;
            ExperimentResult res;
            try {
                res = run_experiment(cfg);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 2;
            }
            std::cout << "frontier components: " << res.frontier.component_count
                      << ", vertices: " << res.frontier.vertex_count() << "\n"
                      << "audit verdict: " << to_string(res.score_audit.verdict)
                      << ", violation depth: " << format_float(res.violation.depth) << "\n"
                      << "hausdorff to reference: " << format_float(res.hausdorff_to_reference)
                      << "\n"
                      << "runtime: " << res.runtime_seconds << " s\n";
            if (!cfg.output_dir.empty()) std::cout << "artifacts in " << cfg.output_dir << "\n";
            return res.exit_code;
        }

        if (*sub_level) {
            const auto [nx, ny] = parse_grid(lv_grid);
            std::vector<Scalar> b;
            std::stringstream ss(lv_box);
            std::string tok;
            while (std::getline(ss, tok, ',')) b.push_back(std::stod(tok));
            if (b.size() != 4) throw std::runtime_error("--box expects x0,y0,x1,y1");
            Box box;
            box.lo = Vector(2);
            box.hi = Vector(2);
            box.lo << b[0], b[1];
            box.hi << b[2], b[3];
            const ScoreFunction f = load_score_function(lv_model);
            const FrontierEstimate e = extract_zero_set(f, box, nx, ny);
            std::filesystem::create_directories(lv_out);
            write_frontier_csv(e, lv_out + "/frontier.csv");
            Matrix values(nx + 1, ny + 1);
            for (int i = 0; i <= nx; ++i)
                for (int j = 0; j <= ny; ++j) {
                    Vector y(2);
                    y << box.lo(0) + (box.hi(0) - box.lo(0)) * i / nx,
                        box.lo(1) + (box.hi(1) - box.lo(1)) * j / ny;
                    values(i, j) = f.value(y);
                }
            write_contour_grid_csv(box, nx, ny, values, lv_out + "/contour_grid.csv");
            std::cout << "components: " << e.component_count << ", vertices: " << e.vertex_count()
                      << (e.diagnostic.empty() ? "" : "\n" + e.diagnostic) << "\n";
            return 0;
        }

        if (*sub_audit) {
            const ScoreFunction f = load_score_function(au_model);
            PointSet samples;
            if (!au_samples.empty()) {
                samples = read_point_set_csv(au_samples);
            } else if (!au_frontier.empty()) {
                samples = read_frontier_csv(au_frontier).vertices();
            } else {
                throw std::runtime_error("audit needs --samples or --frontier");
            }
            AuditConfig acfg;
            acfg.seed = au_seed;
            const ValidityReport rep = check_score_function(f, samples, acfg);
            std::filesystem::create_directories(au_out);
            write_validity_csv(rep, au_out + "/validity_summary.csv");
            JsonOut j = JsonOut::object();
            j.set("verdict", to_string(rep.verdict));
            j.set("max_violation", rep.max_violation);
            j.set("failures", rep.failures());
            j.set("rows", static_cast<int>(rep.samples.size()));
            j.set("rejected_samples", rep.rejected_samples);
            std::ofstream out(au_out + "/validity.json");
            out << j.dump() << "\n";
            std::cout << "verdict: " << to_string(rep.verdict) << " (" << rep.failures() << "/"
                      << rep.samples.size() << " rows failed, " << rep.rejected_samples
                      << " samples rejected)\n";
            return rep.verdict == Verdict::violated ? 3 : 0;
        }

        if (*sub_compare) {
            std::vector<ExperimentConfig> configs;
            for (const auto& spec : cp_specs) {
                ExperimentConfig c;
                c.problem = cp_problem;
                c.seed = cp_seed;
                std::stringstream ss(spec);
                std::string kv;
                while (std::getline(ss, kv, ',')) {
                    const auto eq = kv.find('=');
                    if (eq == std::string::npos)
                        throw std::runtime_error("bad --spec entry: " + kv);
                    const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
                    if (key == "model") c.model = model_kind_from_string(val);
                    else if (key == "beta") c.beta = parse_beta(val);
                    else if (key == "gamma") c.gamma = std::stod(val);
                    else if (key == "seed") c.seed = std::stoull(val);
                    else if (key == "restarts") c.restarts = std::stoi(val);
                    else throw std::runtime_error("unknown spec key: " + key);
                }
                configs.push_back(std::move(c));
            }
            const auto rows = compare_models(configs);
            std::filesystem::create_directories(cp_out);
            write_comparison_csv(rows, cp_out + "/comparison.csv");
            write_comparison_json(rows, cp_out + "/comparison.json");
            for (const auto& r : rows)
                std::cout << r.label << ": hausdorff=" << format_float(r.hausdorff)
                          << " violation_depth=" << format_float(r.violation_depth)
                          << " sign_partition=" << (r.sign_partition_ok ? "ok" : "FAILED") << "\n";
            std::cout << "table in " << cp_out << "/comparison.csv\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
