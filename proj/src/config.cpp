#include "pfcs/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

namespace pfcs {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& where) {
    if (!j.is_object()) throw ConfigError("expected an object", where);
    for (const auto& item : j.items())
        if (!known.count(item.key()))
            throw ConfigError("unknown key '" + item.key() + "'", where);
}

double get_num(const json& j, const std::string& key, double fallback,
               const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number())
        throw ConfigError("expected a number", where + "." + key);
    return j.at(key).get<double>();
}

int get_int(const json& j, const std::string& key, int fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer())
        throw ConfigError("expected an integer", where + "." + key);
    return j.at(key).get<int>();
}

std::string get_str(const json& j, const std::string& key, const std::string& fallback,
                    const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_string())
        throw ConfigError("expected a string", where + "." + key);
    return j.at(key).get<std::string>();
}

bool get_bool(const json& j, const std::string& key, bool fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean())
        throw ConfigError("expected a boolean", where + "." + key);
    return j.at(key).get<bool>();
}

ProfileSpec parse_profile(const json& j, const std::string& where) {
    reject_unknown_keys(j, {"preset", "value", "mean", "amplitude", "mode",
                            "left", "right", "center", "width"}, where);
    ProfileSpec s;
    s.preset = get_str(j, "preset", "constant", where);
    if (s.preset != "constant" && s.preset != "cosine" && s.preset != "step_smooth")
        throw ConfigError("unknown preset '" + s.preset + "'", where + ".preset");
    s.value = get_num(j, "value", 0.0, where);
    s.mean = get_num(j, "mean", 0.0, where);
    s.amplitude = get_num(j, "amplitude", 0.0, where);
    s.mode = get_int(j, "mode", 1, where);
    s.left = get_num(j, "left", 0.0, where);
    s.right = get_num(j, "right", 0.0, where);
    s.center = get_num(j, "center", 0.5, where);
    s.width = get_num(j, "width", 0.1, where);
    if (s.preset == "cosine" && s.mode < 0)
        throw ConfigError("mode must be >= 0", where + ".mode");
    if (s.preset == "step_smooth" && !(s.width > 0.0))
        throw ConfigError("width must be > 0", where + ".width");
    return s;
}

ForcingSpec parse_forcing(const json& j, const std::string& where) {
    reject_unknown_keys(j, {"preset", "value", "amplitude", "mode", "decay", "mollify"}, where);
    ForcingSpec s;
    s.preset = get_str(j, "preset", "zero", where);
    if (s.preset != "zero" && s.preset != "constant" && s.preset != "cosine")
        throw ConfigError("unknown preset '" + s.preset + "'", where + ".preset");
    s.value = get_num(j, "value", 0.0, where);
    s.amplitude = get_num(j, "amplitude", 0.0, where);
    s.mode = get_int(j, "mode", 1, where);
    s.decay = get_num(j, "decay", 0.0, where);
    s.mollify = get_bool(j, "mollify", true, where);
    return s;
}

json profile_json(const ProfileSpec& s) {
    json j;
    j["preset"] = s.preset;
    if (s.preset == "constant") {
        j["value"] = s.value;
    } else if (s.preset == "cosine") {
        j["mean"] = s.mean;
        j["amplitude"] = s.amplitude;
        j["mode"] = s.mode;
    } else {
        j["left"] = s.left;
        j["right"] = s.right;
        j["center"] = s.center;
        j["width"] = s.width;
    }
    return j;
}

json forcing_json(const ForcingSpec& s) {
    json j;
    j["preset"] = s.preset;
    if (s.preset == "constant") j["value"] = s.value;
    if (s.preset == "cosine") {
        j["amplitude"] = s.amplitude;
        j["mode"] = s.mode;
        j["decay"] = s.decay;
    }
    if (s.preset != "zero") j["mollify"] = s.mollify;
    return j;
}

} // namespace

RunConfig parse_config(const nlohmann::json& j) {
    reject_unknown_keys(j, {"geometry", "params", "data", "time", "scheme",
                            "sweep", "outputs", "seed", "workers"}, "config");
    RunConfig cfg;

    if (j.contains("geometry")) {
        const auto& g = j.at("geometry");
        reject_unknown_keys(g, {"n_cells", "length"}, "geometry");
        cfg.geom.n_cells = get_int(g, "n_cells", cfg.geom.n_cells, "geometry");
        cfg.geom.length = get_num(g, "length", cfg.geom.length, "geometry");
        if (cfg.geom.n_cells < 2) throw ConfigError("n_cells must be >= 2", "geometry.n_cells");
        if (!(cfg.geom.length > 0.0)) throw ConfigError("length must be > 0", "geometry.length");
    }

    if (j.contains("params")) {
        const auto& p = j.at("params");
        reject_unknown_keys(p, {"tau", "eta", "eps", "lambda", "beta", "pi"}, "params");
        cfg.tau = get_num(p, "tau", cfg.tau, "params");
        cfg.eta = get_num(p, "eta", cfg.eta, "params");
        cfg.eps = get_num(p, "eps", cfg.eps, "params");
        cfg.lambda = get_num(p, "lambda", cfg.lambda, "params");
        if (p.contains("beta")) {
            reject_unknown_keys(p.at("beta"), {"name"}, "params.beta");
            cfg.beta_name = get_str(p.at("beta"), "name", cfg.beta_name, "params.beta");
        }
        if (p.contains("pi")) {
            reject_unknown_keys(p.at("pi"), {"name", "scale"}, "params.pi");
            cfg.pi_name = get_str(p.at("pi"), "name", cfg.pi_name, "params.pi");
            cfg.pi_scale = get_num(p.at("pi"), "scale", cfg.pi_scale, "params.pi");
        }
    }

    if (j.contains("data")) {
        const auto& d = j.at("data");
        reject_unknown_keys(d, {"theta0", "phi0", "v0", "forcing"}, "data");
        if (d.contains("theta0")) cfg.theta0 = parse_profile(d.at("theta0"), "data.theta0");
        if (d.contains("phi0")) cfg.phi0 = parse_profile(d.at("phi0"), "data.phi0");
        if (d.contains("v0")) cfg.v0 = parse_profile(d.at("v0"), "data.v0");
        if (d.contains("forcing")) cfg.forcing = parse_forcing(d.at("forcing"), "data.forcing");
    }

    if (j.contains("time")) {
        const auto& t = j.at("time");
        reject_unknown_keys(t, {"t_final", "dt"}, "time");
        cfg.t_final = get_num(t, "t_final", cfg.t_final, "time");
        cfg.dt = get_num(t, "dt", cfg.dt, "time");
        if (cfg.t_final < 0.0) throw ConfigError("t_final must be >= 0", "time.t_final");
        if (!(cfg.dt > 0.0)) throw ConfigError("dt must be > 0", "time.dt");
    }

    cfg.scheme = get_str(j, "scheme", cfg.scheme, "config");
    scheme_by_name(cfg.scheme); // validates

    if (j.contains("sweep") && !j.at("sweep").is_null()) {
        const auto& s = j.at("sweep");
        reject_unknown_keys(s, {"param", "values", "norm"}, "sweep");
        SweepConfig sc;
        sc.param = get_str(s, "param", "lambda", "sweep");
        sweep_param_by_name(sc.param);
        sc.norm = get_str(s, "norm", "c0_h", "sweep");
        traj_norm_by_name(sc.norm);
        if (!s.contains("values") || !s.at("values").is_array() || s.at("values").empty())
            throw ConfigError("values must be a nonempty array", "sweep.values");
        for (const auto& v : s.at("values")) {
            if (!v.is_number()) throw ConfigError("values must be numbers", "sweep.values");
            sc.values.push_back(v.get<double>());
        }
        cfg.sweep = sc;
    }

    if (j.contains("outputs")) {
        const auto& o = j.at("outputs");
        reject_unknown_keys(o, {"dir", "write_trajectory", "store_every"}, "outputs");
        cfg.output_dir = get_str(o, "dir", cfg.output_dir, "outputs");
        cfg.write_trajectory = get_bool(o, "write_trajectory", cfg.write_trajectory, "outputs");
        cfg.store_every = get_int(o, "store_every", cfg.store_every, "outputs");
        if (cfg.store_every < 1) throw ConfigError("store_every must be >= 1", "outputs.store_every");
    }

    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned())
            throw ConfigError("expected an unsigned integer", "seed");
        cfg.seed = j.at("seed").get<unsigned>();
    }
    cfg.workers = get_int(j, "workers", cfg.workers, "config");
    if (cfg.workers < 0) throw ConfigError("workers must be >= 0", "workers");

    // Range checks shared with Params::validate, reported with config paths.
    build_params(cfg).validate();
    return cfg;
}

RunConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("JSON parse error: ") + e.what());
    }
    if (j.is_object() && j.contains("config")) return parse_config(j.at("config"));
    return parse_config(j);
}

nlohmann::json to_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["geometry"] = {{"n_cells", cfg.geom.n_cells}, {"length", cfg.geom.length}};
    j["params"] = {{"tau", cfg.tau},
                   {"eta", cfg.eta},
                   {"eps", cfg.eps},
                   {"lambda", cfg.lambda},
                   {"beta", {{"name", cfg.beta_name}}},
                   {"pi", {{"name", cfg.pi_name}, {"scale", cfg.pi_scale}}}};
    j["data"] = {{"theta0", profile_json(cfg.theta0)},
                 {"phi0", profile_json(cfg.phi0)},
                 {"v0", profile_json(cfg.v0)},
                 {"forcing", forcing_json(cfg.forcing)}};
    j["time"] = {{"t_final", cfg.t_final}, {"dt", cfg.dt}};
    j["scheme"] = cfg.scheme;
    if (cfg.sweep) {
        j["sweep"] = {{"param", cfg.sweep->param},
                      {"values", cfg.sweep->values},
                      {"norm", cfg.sweep->norm}};
    }
    j["outputs"] = {{"dir", cfg.output_dir},
                    {"write_trajectory", cfg.write_trajectory},
                    {"store_every", cfg.store_every}};
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    return j;
}

Field build_profile(const ProfileSpec& spec, const GridGeom& g, const std::string& tag) {
    if (spec.preset == "constant") return Field(g, spec.value, tag);
    if (spec.preset == "cosine") {
        Field f = cosine_mode(g, spec.mode, spec.amplitude, spec.mean);
        f.set_tag(tag);
        return f;
    }
    // step_smooth: left + (right-left)·(1 + tanh((x-center)/width))/2
    Field f = Field::sampled(g, [&](double x) {
        return spec.left + (spec.right - spec.left) *
                               0.5 * (1.0 + std::tanh((x - spec.center) / spec.width));
    }, tag);
    return f;
}

TimeField build_forcing(const ForcingSpec& spec, const GridGeom& g) {
    if (spec.preset == "zero") return TimeField::zero();
    if (spec.preset == "constant") {
        const double v = spec.value;
        return TimeField::analytic([v](double, double) { return v; });
    }
    const double a = spec.amplitude;
    const double k = spec.mode;
    const double d = spec.decay;
    const double len = g.length;
    return TimeField::analytic([a, k, d, len](double x, double t) {
        return a * std::cos(k * std::numbers::pi * x / len) * std::exp(-d * t);
    });
}

Params build_params(const RunConfig& cfg) {
    Params p;
    p.tau = cfg.tau;
    p.eta = cfg.eta;
    p.eps = cfg.eps;
    p.lambda = cfg.lambda;
    p.beta = monotone_by_name(cfg.beta_name);
    p.pi = perturbation_by_name(cfg.pi_name, cfg.pi_scale);
    return p;
}

} // namespace pfcs
