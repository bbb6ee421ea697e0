#include "pfcs/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "pfcs/version.hpp"

namespace pfcs {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::filesystem::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + file.string() + "'");
    out << text;
}

void write_manifest(const RunConfig& cfg, const std::string& kind,
                    const std::filesystem::path& dir) {
    json m;
    m["tool"] = "pfcs";
    m["version"] = kVersion;
    m["kind"] = kind;
    m["config"] = to_json(cfg);
    write_text(dir / "manifest.json", m.dump(2) + "\n");
}

json certificate_json(const DataCertificate& c) {
    return {{"envelope_energy", c.envelope_energy},
            {"envelope_bound", c.envelope_bound},
            {"mean_residual_phi", c.mean_residual_phi},
            {"mean_residual_v", c.mean_residual_v},
            {"envelope_ok", c.envelope_ok},
            {"means_ok", c.means_ok}};
}

json monitor_json(const AprioriMonitor& m) {
    return {{"theta_linf_h", m.theta_linf_h},
            {"grad_theta_l2", m.grad_theta_l2},
            {"phi_t_l2h_eta", m.phi_t_l2h_eta},
            {"phi_t_linf_dual_tau", m.phi_t_linf_dual_tau},
            {"phi_t_l2_dual", m.phi_t_l2_dual},
            {"grad_phi_linf", m.grad_phi_linf},
            {"envelope_linf_l1", m.envelope_linf_l1},
            {"mu_l2_dual", m.mu_l2_dual},
            {"w_linf_v", m.w_linf_v},
            {"phi_t_sup_dual", m.phi_t_sup_dual}};
}

struct PreparedRun {
    Params params;
    GridGeom geom;
    Field theta0, phi0, v0;
    InitialData data;
    DataCertificate certificate;
    double dt = 0.0;
    int n_steps = 0;
    Scheme scheme = Scheme::picard_midpoint;
};

PreparedRun prepare(const RunConfig& cfg) {
    PreparedRun r;
    r.geom = cfg.geom;
    r.geom.validate();
    r.params = build_params(cfg);
    r.params.validate();
    r.scheme = scheme_by_name(cfg.scheme);

    r.theta0 = build_profile(cfg.theta0, r.geom, "theta");
    r.phi0 = build_profile(cfg.phi0, r.geom, "phi");
    r.v0 = build_profile(cfg.v0, r.geom, "v");
    const TimeField forcing = build_forcing(cfg.forcing, r.geom);

    if (cfg.t_final > 0.0) {
        const double dt_guarded = guarded_dt(r.params, cfg.dt, r.scheme);
        const double raw_steps = std::ceil(cfg.t_final / dt_guarded - 1e-12);
        if (raw_steps > 2e7)
            throw UsageError("stability guard demands more than 2e7 steps");
        r.n_steps = std::max(1, static_cast<int>(raw_steps));
        r.dt = cfg.t_final / r.n_steps;
    } else {
        r.n_steps = 0;
        r.dt = cfg.dt;
    }

    // The forcing regularization runs on the trajectory's own time grid.
    r.data = prepare_initial_data(r.params, r.theta0, r.phi0, r.v0, forcing,
                                  cfg.t_final, r.n_steps + 1);
    if (!cfg.forcing.mollify && !forcing.is_zero()) r.data.f_eps = forcing;
    r.certificate = certify_data(r.params.eps, r.params.beta, r.data.phi0eps,
                                 r.phi0, r.data.v0eps, r.v0);
    return r;
}

} // namespace

std::filesystem::path resolve_output_dir(const RunConfig& cfg) {
    if (const char* env = std::getenv("PFCS_OUTPUT_DIR"); env && *env)
        return std::filesystem::path(env);
    return std::filesystem::path(cfg.output_dir);
}

int resolve_workers(const RunConfig& cfg) {
    if (const char* env = std::getenv("PFCS_WORKERS"); env && *env) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    return cfg.workers;
}

void write_trajectory_csv(const std::filesystem::path& file, const Trajectory& traj,
                          int store_every) {
    if (store_every < 1) throw UsageError("store_every must be >= 1");
    std::string out;
    const int n = traj.states.empty() ? 0 : traj.states.front().theta.size();
    out += "t";
    for (const char* name : {"theta", "phi", "w", "mu"})
        for (int i = 0; i < n; ++i) out += "," + std::string(name) + "_" + std::to_string(i);
    out += "\n";

    const int last = traj.n_samples() - 1;
    for (int k = 0; k <= last; ++k) {
        if (k % store_every != 0 && k != last) continue;
        const auto ks = static_cast<size_t>(k);
        out += fmt17(traj.times[ks]);
        auto append_field = [&](const Field& f) {
            for (int i = 0; i < n; ++i) out += "," + fmt17(f[i]);
        };
        append_field(traj.states[ks].theta);
        append_field(traj.states[ks].phi);
        append_field(traj.states[ks].w);
        append_field(traj.mu[ks]);
        out += "\n";
    }
    write_text(file, out);
}

int run_command(const RunConfig& cfg, const std::filesystem::path& outdir) {
    std::filesystem::create_directories(outdir);
    write_manifest(cfg, "run", outdir);

    const PreparedRun r = prepare(cfg);
    json rep;
    rep["certificate"] = certificate_json(r.certificate);
    rep["dt"] = r.dt;
    rep["n_steps"] = r.n_steps;
    rep["lipschitz"] = r.params.tau == 0.0 ? limit_lipschitz_estimate(r.params)
                                           : lipschitz_estimate(r.params);

    try {
        const Trajectory traj = integrate(r.params, r.data, make_initial_state(r.data),
                                          r.dt, r.n_steps, r.scheme);
        if (cfg.write_trajectory)
            write_trajectory_csv(outdir / "trajectory.csv", traj, cfg.store_every);

        if (r.params.tau > 0.0 && traj.n_samples() > 1) {
            const MeanLawReport ml = mean_laws(traj, r.params, r.data);
            std::string csv = "t,mean_phi,mean_phi_ref,defect_phi,mean_phi_t,mean_phi_t_ref,defect_phi_t\n";
            for (size_t k = 0; k < ml.times.size(); ++k) {
                csv += fmt17(ml.times[k]) + "," + fmt17(ml.mean_phi[k]) + "," +
                       fmt17(ml.mean_phi_ref[k]) + "," + fmt17(ml.defect_phi[k]) + "," +
                       fmt17(ml.mean_phi_t[k]) + "," + fmt17(ml.mean_phi_t_ref[k]) + "," +
                       fmt17(ml.defect_phi_t[k]) + "\n";
            }
            write_text(outdir / "mean_laws.csv", csv);
            rep["mean_laws"] = {{"sup_defect_phi", ml.sup_defect_phi},
                                {"sup_defect_phi_t", ml.sup_defect_phi_t},
                                {"dt", ml.dt}};

            const EnergyLedger led = energy_ledger(traj, r.params, r.data);
            std::string lcsv =
                "t,e_theta,e_inertia,e_grad_phi,e_envelope,e_lambda_tau,e_eta_phi,"
                "d_grad_theta,d_lambda_theta,d_dual_phi_t,d_eta_phi_t,d_lambda_phi_t,"
                "work,residual\n";
            for (size_t k = 0; k < led.times.size(); ++k) {
                lcsv += fmt17(led.times[k]) + "," + fmt17(led.e_theta[k]) + "," +
                        fmt17(led.e_inertia[k]) + "," + fmt17(led.e_grad_phi[k]) + "," +
                        fmt17(led.e_envelope[k]) + "," + fmt17(led.e_lambda_tau[k]) + "," +
                        fmt17(led.e_eta_phi[k]) + "," + fmt17(led.d_grad_theta[k]) + "," +
                        fmt17(led.d_lambda_theta[k]) + "," + fmt17(led.d_dual_phi_t[k]) + "," +
                        fmt17(led.d_eta_phi_t[k]) + "," + fmt17(led.d_lambda_phi_t[k]) + "," +
                        fmt17(led.work[k]) + "," + fmt17(led.residual[k]) + "\n";
            }
            write_text(outdir / "energy_ledger.csv", lcsv);
            rep["energy_ledger"] = {{"sup_residual", led.sup_residual},
                                    {"min_dissipation", led.min_dissipation}};
        }

        rep["apriori_monitor"] = monitor_json(apriori_monitor(traj, r.params));
        if (traj.n_samples() >= 3) {
            const WeakResiduals wr = weak_residual(traj, r.params, r.data);
            rep["weak_residuals"] = {{"r1_sup_dual", wr.r1_sup_dual},
                                     {"r2_sup_dual", wr.r2_sup_dual},
                                     {"r3_sup_dual", wr.r3_sup_dual},
                                     {"r1_l2_dual", wr.r1_l2_dual},
                                     {"r2_l2_dual", wr.r2_l2_dual},
                                     {"r3_l2_dual", wr.r3_l2_dual}};
        }
        write_text(outdir / "reports.json", rep.dump(2) + "\n");
        return 0;
    } catch (const SolverError& e) {
        rep["failure"] = {{"kind", "solver"}, {"message", e.what()},
                          {"residual", e.residual}, {"iterations", e.iterations}};
        write_text(outdir / "reports.json", rep.dump(2) + "\n");
        return 3;
    } catch (const StepRejected& e) {
        rep["failure"] = {{"kind", "step_rejected"}, {"message", e.what()},
                          {"dt", e.dt}, {"bound", e.bound}};
        write_text(outdir / "reports.json", rep.dump(2) + "\n");
        return 3;
    }
}

int sweep_command(const RunConfig& cfg, const std::filesystem::path& outdir) {
    if (!cfg.sweep) throw ConfigError("sweep section required", "sweep");
    std::filesystem::create_directories(outdir);
    write_manifest(cfg, "sweep", outdir);

    SweepSpec spec;
    spec.param = sweep_param_by_name(cfg.sweep->param);
    spec.values = cfg.sweep->values;
    spec.base = build_params(cfg);
    spec.norm = traj_norm_by_name(cfg.sweep->norm);

    SweepSetup setup;
    setup.geom = cfg.geom;
    setup.theta0 = build_profile(cfg.theta0, cfg.geom, "theta");
    setup.phi0 = build_profile(cfg.phi0, cfg.geom, "phi");
    setup.v0 = build_profile(cfg.v0, cfg.geom, "v");
    setup.forcing = build_forcing(cfg.forcing, cfg.geom);
    setup.t_final = cfg.t_final;
    setup.dt_target = cfg.dt;
    setup.scheme = scheme_by_name(cfg.scheme);
    setup.workers = resolve_workers(cfg);

    const std::vector<SweepPoint> points = sweep(spec, setup);

    json rep;
    rep["param"] = cfg.sweep->param;
    rep["norm"] = cfg.sweep->norm;
    json jpoints = json::array();
    bool any_failed = false;
    for (size_t i = 0; i < points.size(); ++i) {
        const SweepPoint& pt = points[i];
        json jp = {{"value", pt.value}, {"ok", pt.ok}, {"dt", pt.dt_used}};
        if (!pt.ok) {
            jp["error"] = pt.error;
            any_failed = true;
        } else if (cfg.write_trajectory) {
            char sub[32];
            std::snprintf(sub, sizeof sub, "point_%02zu", i);
            std::filesystem::create_directories(outdir / sub);
            write_trajectory_csv(outdir / sub / "trajectory.csv", pt.traj, cfg.store_every);
            jp["dir"] = sub;
        }
        jpoints.push_back(jp);
    }
    rep["points"] = jpoints;

    // Split a trailing tau = 0 point off as the limit solution.
    std::vector<Trajectory> trajs;
    std::vector<double> values;
    const Trajectory* limit = nullptr;
    for (const SweepPoint& pt : points) {
        if (!pt.ok) continue;
        if (spec.param == SweepParam::tau && pt.value == 0.0) {
            limit = &pt.traj;
        } else {
            trajs.push_back(pt.traj);
            values.push_back(pt.value);
        }
    }

    std::string csv = "value_hi,value_lo,distance,observed_order\n";
    if (trajs.size() >= 2) {
        const ConvergenceReport rc = cauchy_rates(trajs, values, spec.norm);
        rep["cauchy"] = {{"distances", rc.distances},
                         {"observed_orders", rc.observed_orders},
                         {"monotone_decreasing", rc.monotone_decreasing}};
        for (size_t k = 0; k < rc.distances.size(); ++k) {
            csv += fmt17(values[k]) + "," + fmt17(values[k + 1]) + "," +
                   fmt17(rc.distances[k]) + ",";
            csv += (k < rc.observed_orders.size() ? fmt17(rc.observed_orders[k]) : "");
            csv += "\n";
        }
    }
    if (limit && !trajs.empty()) {
        const ConvergenceReport rl = limit_compare(trajs, values, *limit, spec.norm);
        rep["limit_compare"] = {{"direct_errors", rl.direct_errors},
                                {"inertia_indicator", rl.inertia_indicator},
                                {"observed_orders", rl.observed_orders},
                                {"monotone_decreasing", rl.monotone_decreasing}};
    }
    write_text(outdir / "sweep_distances.csv", csv);
    write_text(outdir / "sweep_report.json", rep.dump(2) + "\n");
    return any_failed ? 3 : 0;
}

} // namespace pfcs
