// integrate.hpp
// Fixed-step time integration of the regularized system: explicit RK4 behind
// a stability guard, and implicit midpoint solved by Picard fixed-point
// iteration (the constructive counterpart of the contraction argument that
// gives well-posedness), with a dense modified-Newton fallback for steps
// past the contraction bound.

#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "pfcs/system.hpp"

namespace pfcs {

enum class Scheme { rk4, picard_midpoint };

Scheme scheme_by_name(const std::string& name);
std::string scheme_name(Scheme s);

using FieldEval = std::function<StateRate(double, const State&)>;

struct StepControls {
    double picard_tol = 1e-12;
    int picard_max_iter = 60;
    bool newton_fallback = true;
    double rk4_dt_max = std::numeric_limits<double>::infinity();
};

struct PicardStats {
    int iterations = 0;
    bool used_newton = false;
    std::vector<double> residual_history;
};

// Classical 4th-order step. Throws StepRejected when dt exceeds dt_max.
State step_rk4(const FieldEval& f, double t, double dt, const State& s,
               double dt_max = std::numeric_limits<double>::infinity());

// Implicit midpoint: X = s + dt·f(t + dt/2, (s + X)/2), solved by Picard
// iteration to increment norm <= tol·max(1, ||s||); on stall, optionally by
// modified Newton with a finite-difference Jacobian. Throws SolverError
// (with the residual history) when neither converges.
State step_picard_midpoint(const FieldEval& f, double t, double dt, const State& s,
                           double tol, int max_iter, bool newton_fallback = true,
                           PicardStats* stats = nullptr);

// Upper bound for the Lipschitz constant of the τ > 0 vector field on H³:
// the Frobenius norm of the 3x3 matrix of blockwise bounds
//   [ 1/λ      1/τ                      1/(τλ)   ]
//   [ 0        1/τ                      1/(τλ)   ]
//   [ 1        η/τ + 1/λ + 1/ε + L_π    η/(τλ)   ]
// using that (-Δ_N)_λ is 1/λ-Lipschitz and β_ε is 1/ε-Lipschitz.
double lipschitz_estimate(const Params& p);

// Same for the τ = 0 limit field ((I + η(-Δ_N)_λ)^{-1} is nonexpansive).
double limit_lipschitz_estimate(const Params& p);

// Stability guard for RK4 (real-axis stability extent ≈ 2.785, kept at 2.5)
// and contraction-friendly bound for Picard (dt·K <= 1/2).
double rk4_guard_dt(double lipschitz);
double picard_guard_dt(double lipschitz);
double guarded_dt(const Params& p, double dt_target, Scheme scheme);

struct Trajectory {
    Params params;
    std::vector<double> times;
    std::vector<State> states;
    std::vector<Field> mu; // recovered chemical potential per sample
    double dt = 0.0;
    Scheme scheme = Scheme::picard_midpoint;

    int n_samples() const { return static_cast<int>(times.size()); }
    double t_final() const { return times.empty() ? 0.0 : times.back(); }
};

using StepHook = std::function<void(int step, const State& s, const StateRate& rate)>;

// Integrate n_steps of size dt from s0 (trajectory of n_steps + 1 samples,
// including the initial state). Deterministic for identical inputs.
Trajectory integrate(const Params& p, const InitialData& data, const State& s0,
                     double dt, int n_steps, Scheme scheme,
                     const StepControls& controls = {}, const StepHook& hook = {});

} // namespace pfcs
