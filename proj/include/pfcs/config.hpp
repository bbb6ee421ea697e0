// config.hpp
// JSON run configuration: geometry, parameters, data presets, time grid,
// scheme, optional sweep, and output options. A manifest is the same object
// wrapped with tool/version metadata; re-running a manifest reproduces the
// original artifacts byte for byte.

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "pfcs/asymptotics.hpp"
#include "pfcs/system.hpp"

namespace pfcs {

struct ProfileSpec {
    std::string preset = "constant"; // constant | cosine | step_smooth
    double value = 0.0;              // constant
    double mean = 0.0, amplitude = 0.0;
    int mode = 1;                    // cosine: mean + amplitude·cos(mode·πx/L)
    double left = 0.0, right = 0.0, center = 0.5, width = 0.1; // step_smooth
};

struct ForcingSpec {
    std::string preset = "zero"; // zero | constant | cosine
    double value = 0.0;          // constant
    double amplitude = 0.0;
    int mode = 1;
    double decay = 0.0; // cosine: amplitude·cos(mode·πx/L)·e^{-decay·t}
    bool mollify = true;
};

struct SweepConfig {
    std::string param = "lambda";
    std::vector<double> values;
    std::string norm = "c0_h";
};

struct RunConfig {
    GridGeom geom{128, 1.0};
    double tau = 0.5, eta = 0.5, eps = 0.1, lambda = 0.1;
    std::string beta_name = "cubic";
    std::string pi_name = "negative_identity";
    double pi_scale = 1.0;
    ProfileSpec theta0, phi0, v0;
    ForcingSpec forcing;
    double t_final = 0.25;
    double dt = 1e-3;
    std::string scheme = "picard_midpoint";
    std::optional<SweepConfig> sweep;
    std::string output_dir = "artifacts";
    bool write_trajectory = true;
    int store_every = 1;
    unsigned seed = 20240901;
    int workers = 0;
};

RunConfig parse_config(const nlohmann::json& j);
// Reads a config file; a manifest (object with a "config" key) is unwrapped.
RunConfig load_config_file(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& cfg); // fully resolved, canonical

Field build_profile(const ProfileSpec& spec, const GridGeom& g, const std::string& tag);
TimeField build_forcing(const ForcingSpec& spec, const GridGeom& g);
Params build_params(const RunConfig& cfg);

} // namespace pfcs
