// asymptotics.hpp
// Parameter sweeps toward the four singular limits λ→0, ε→0, η→0, τ→0 and
// convergence-order estimation from Cauchy differences (or direct errors
// against the τ = 0 limit solver). No extrapolated "true" solution is ever
// claimed; reports carry observed distances and orders only.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pfcs/integrate.hpp"

namespace pfcs {

enum class SweepParam { lambda, eps, eta, tau };
enum class TrajNorm { c0_h, l2_dual, linf_dual };

SweepParam sweep_param_by_name(const std::string& name);
std::string sweep_param_name(SweepParam p);
TrajNorm traj_norm_by_name(const std::string& name);
std::string traj_norm_name(TrajNorm n);

struct SweepSpec {
    SweepParam param = SweepParam::lambda;
    std::vector<double> values; // strictly decreasing; > 0 (tau may end at 0)
    Params base;
    TrajNorm norm = TrajNorm::c0_h;

    void validate() const;
};

// Shared run setup: raw (unmollified) data, final time, target step. Data is
// re-mollified per sweep point, so ε-sweeps rebuild their approximating data.
struct SweepSetup {
    GridGeom geom;
    Field theta0, phi0, v0;
    TimeField forcing;
    double t_final = 0.25;
    double dt_target = 1e-3;
    Scheme scheme = Scheme::picard_midpoint;
    int workers = 0; // 0 = hardware concurrency
};

struct SweepPoint {
    double value = 0.0;
    bool ok = false;
    std::string error;
    Trajectory traj;
    double dt_used = 0.0;
};

// One trajectory per value; per-point failures are recorded and the sweep
// continues. Points run on a worker pool; assembly order is deterministic.
std::vector<SweepPoint> sweep(const SweepSpec& spec, const SweepSetup& setup);

Params params_with(const Params& base, SweepParam which, double value);

struct ConvergenceReport {
    std::vector<double> values;
    std::vector<double> distances;         // d_k = dist(sol_k, sol_{k+1})
    std::vector<double> observed_orders;   // log2(d_k / d_{k+1})
    bool monotone_decreasing = false;
    std::vector<double> direct_errors;     // e_k vs the limit solution (if any)
    std::vector<double> inertia_indicator; // τ_k · sup_t ‖φ_t‖_*
    TrajNorm norm = TrajNorm::c0_h;
};

// Distances between successive φ trajectories on the coarsest common time
// grid (linear interpolation in time where grids differ).
ConvergenceReport cauchy_rates(const std::vector<Trajectory>& trajs,
                               const std::vector<double>& values, TrajNorm norm);

// Direct errors of a τ-sweep against the τ = 0 limit trajectory, plus the
// vanishing-inertia indicator τ·sup_t‖φ_t‖_*. Frozen (λ, ε, η) must match.
ConvergenceReport limit_compare(const std::vector<Trajectory>& tau_trajs,
                                const std::vector<double>& taus,
                                const Trajectory& limit_traj, TrajNorm norm);

// φ(t) with linear interpolation between stored samples.
Field interp_phi(const Trajectory& traj, double t);

double traj_distance(const Trajectory& a, const Trajectory& b, TrajNorm norm);

} // namespace pfcs
