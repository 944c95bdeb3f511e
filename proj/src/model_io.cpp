#include "pareto/model_io.hpp"

#include "pareto/json_out.hpp"

#include <json.hpp>

#include <fstream>

namespace pareto {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    return json::parse(in);
}

void write_file(const std::string& path, const JsonOut& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open model file for writing: " + path);
    out << j.dump() << "\n";
}

Scalar to_scalar(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<Scalar>::infinity();
        if (s == "-inf") return -std::numeric_limits<Scalar>::infinity();
        if (s == "nan") return std::numeric_limits<Scalar>::quiet_NaN();
        throw std::runtime_error("bad numeric string in model file: " + s);
    }
    return j.get<Scalar>();
}

Vector to_vector(const json& j) {
    Vector v(static_cast<int>(j.size()));
    for (int i = 0; i < v.size(); ++i) v(i) = to_scalar(j[static_cast<size_t>(i)]);
    return v;
}

PointSet to_point_set(const json& j) {
    if (j.empty()) return PointSet(0, 0);
    PointSet s(static_cast<int>(j.size()), static_cast<int>(j[0].size()));
    for (int i = 0; i < s.rows(); ++i) s.row(i) = to_vector(j[static_cast<size_t>(i)]).transpose();
    return s;
}

JsonOut from_point_set(const PointSet& s) {
    JsonOut rows = JsonOut::array();
    for (int i = 0; i < s.rows(); ++i) rows.push(JsonOut::array(s.row(i).transpose()));
    return rows;
}

}  // namespace

void save_gp_json(const GpModel& m, const std::string& path) {
    JsonOut j = JsonOut::object();
    j.set("type", "gp");
    j.set("eta", m.params.eta);
    j.set("rho", JsonOut::array(m.params.rho));
    j.set("noise_var", m.noise_var);
    j.set("inputs", from_point_set(m.inputs));
    j.set("targets", JsonOut::array(m.targets));
    write_file(path, j);
}

GpModel load_gp_json(const std::string& path) {
    const json j = parse_file(path);
    SeKernelParams p;
    p.eta = to_scalar(j.at("eta"));
    p.rho = to_vector(j.at("rho"));
    return fit_gp(to_point_set(j.at("inputs")), to_vector(j.at("targets")), p,
                  to_scalar(j.at("noise_var")));
}

void save_monotonic_json(const MonotonicGpModel& m, const std::string& path) {
    JsonOut j = JsonOut::object();
    j.set("type", "monotonic_gp");
    j.set("eta", m.params.eta);
    j.set("rho", JsonOut::array(m.params.rho));
    j.set("noise_var", m.noise_var);
    j.set("nu", m.config.nu);
    j.set("ep_tol", m.config.ep_tol);
    j.set("max_sweeps", m.config.max_sweeps);
    j.set("damping", m.config.damping);
    JsonOut prior = JsonOut::object();
    prior.set("alpha", m.config.noise_prior.alpha);
    prior.set("beta", m.config.noise_prior.beta);
    j.set("noise_prior", std::move(prior));
    j.set("inputs", from_point_set(m.inputs));
    j.set("targets", JsonOut::array(m.targets));
    JsonOut cons = JsonOut::array();
    for (const auto& c : m.constraints) {
        JsonOut jc = JsonOut::object();
        jc.set("location", JsonOut::array(c.location));
        jc.set("direction", c.direction);
        cons.push(std::move(jc));
    }
    j.set("constraints", std::move(cons));
    JsonOut ep = JsonOut::object();
    ep.set("site_tau", JsonOut::array(m.ep.site_tau));
    ep.set("site_nu", JsonOut::array(m.ep.site_nu));
    ep.set("site_mean", JsonOut::array(m.ep.site_mean));
    ep.set("site_var", JsonOut::array(m.ep.site_var));
    ep.set("site_logz", JsonOut::array(m.ep.site_logz));
    ep.set("converged", m.ep.converged);
    ep.set("iterations", m.ep.iterations);
    ep.set("skipped_updates", m.ep.skipped_updates);
    j.set("ep", std::move(ep));
    write_file(path, j);
}

MonotonicGpModel load_monotonic_json(const std::string& path) {
    const json j = parse_file(path);
    MonotonicGpModel m;
    m.params.eta = to_scalar(j.at("eta"));
    m.params.rho = to_vector(j.at("rho"));
    m.noise_var = to_scalar(j.at("noise_var"));
    m.config.nu = to_scalar(j.at("nu"));
    m.config.ep_tol = to_scalar(j.at("ep_tol"));
    m.config.max_sweeps = j.at("max_sweeps").get<int>();
    m.config.damping = to_scalar(j.at("damping"));
    m.config.noise_prior.alpha = to_scalar(j.at("noise_prior").at("alpha"));
    m.config.noise_prior.beta = to_scalar(j.at("noise_prior").at("beta"));
    m.inputs = to_point_set(j.at("inputs"));
    m.targets = to_vector(j.at("targets"));
    for (const auto& jc : j.at("constraints"))
        m.constraints.push_back({to_vector(jc.at("location")), jc.at("direction").get<int>()});
    const json& ep = j.at("ep");
    m.ep.site_tau = to_vector(ep.at("site_tau"));
    m.ep.site_nu = to_vector(ep.at("site_nu"));
    m.ep.site_mean = to_vector(ep.at("site_mean"));
    m.ep.site_var = to_vector(ep.at("site_var"));
    m.ep.site_logz = to_vector(ep.at("site_logz"));
    m.ep.converged = ep.at("converged").get<bool>();
    m.ep.iterations = ep.at("iterations").get<int>();
    m.ep.skipped_updates = ep.at("skipped_updates").get<int>();
    refresh_monotonic_caches(m);
    return m;
}

void save_ocsvm_json(const OneClassSvmModel& m, const std::string& path) {
    JsonOut j = JsonOut::object();
    j.set("type", "ocsvm");
    j.set("gamma", m.gamma);
    j.set("nu", m.nu);
    j.set("rho_offset", m.rho_offset);
    j.set("training_size", m.training_size);
    j.set("kkt_gap", m.kkt_gap);
    JsonOut support = JsonOut::array();
    for (int i = 0; i < m.support_points.rows(); ++i) {
        JsonOut sv = JsonOut::object();
        sv.set("point", JsonOut::array(m.support_points.row(i).transpose()));
        sv.set("alpha", m.support_alphas(i));
        support.push(std::move(sv));
    }
    j.set("support", std::move(support));
    write_file(path, j);
}

OneClassSvmModel load_ocsvm_json(const std::string& path) {
    const json j = parse_file(path);
    OneClassSvmModel m;
    m.gamma = to_scalar(j.at("gamma"));
    m.nu = to_scalar(j.at("nu"));
    m.rho_offset = to_scalar(j.at("rho_offset"));
    m.training_size = j.at("training_size").get<int>();
    m.kkt_gap = to_scalar(j.at("kkt_gap"));
    const json& support = j.at("support");
    const int ns = static_cast<int>(support.size());
    m.support_alphas.resize(ns);
    for (int i = 0; i < ns; ++i) {
        const Vector p = to_vector(support[static_cast<size_t>(i)].at("point"));
        if (i == 0) m.support_points.resize(ns, p.size());
        m.support_points.row(i) = p.transpose();
        m.support_alphas(i) = to_scalar(support[static_cast<size_t>(i)].at("alpha"));
    }
    return m;
}

void save_staircase_json(const StaircaseFrontier& m, const std::string& path) {
    JsonOut j = JsonOut::object();
    j.set("type", "staircase");
    j.set("points", from_point_set(m.points()));
    write_file(path, j);
}

StaircaseFrontier load_staircase_json(const std::string& path) {
    const json j = parse_file(path);
    return StaircaseFrontier(to_point_set(j.at("points")));
}

std::string model_type_of(const std::string& path) {
    return parse_file(path).at("type").get<std::string>();
}

ScoreFunction load_score_function(const std::string& path) {
    const std::string type = model_type_of(path);
    if (type == "gp") return load_gp_json(path).score_function();
    if (type == "monotonic_gp") return load_monotonic_json(path).score_function();
    if (type == "ocsvm") return load_ocsvm_json(path).score_function();
    if (type == "staircase") return load_staircase_json(path).score_function();
    throw std::runtime_error("unknown model type: " + type);
}

}  // namespace pareto
