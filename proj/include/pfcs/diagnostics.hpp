// diagnostics.hpp
// Runtime ledgers for the estimates behind the a priori analysis: the exact
// exponential mean-value laws, the summed energy identity (testing the three
// equations by θ, N(φ_t - m(φ_t)) and φ_t - m(φ_t) and cancelling the
// (θ, φ_t) pairs), the uniform-bound monitor, and the weak-formulation
// residuals reconstructed by centered differences on the stored trajectory.

#pragma once

#include <vector>

#include "pfcs/integrate.hpp"

namespace pfcs {

struct MeanLawReport {
    std::vector<double> times;
    std::vector<double> mean_phi, mean_phi_ref;     // m(φ(t)) vs exponential law
    std::vector<double> mean_phi_t, mean_phi_t_ref; // m(φ_t(t)) vs m(v0)e^{-t/τ}
    std::vector<double> defect_phi, defect_phi_t;
    double sup_defect_phi = 0.0;
    double sup_defect_phi_t = 0.0;
    double dt = 0.0;
};

MeanLawReport mean_laws(const Trajectory& traj, const Params& p, const InitialData& data);

// Per-sample terms of the summed identity d/dt E + D = R with
//   E = ½‖θ‖² + τ/2‖φ_t - m(v0)e^{-t/τ}‖_*² + ½(‖∇J_λφ‖² + λ‖(-Δ_N)_λφ‖²)
//       + ∫β̂_ε(φ) + λτ/2‖φ_t‖² + η/2‖φ‖²
//   D = ‖∇J_λθ‖² + λ‖(-Δ_N)_λθ‖² + ‖φ_t - m(v0)e^{-t/τ}‖_*² + η‖φ_t‖² + λ‖φ_t‖²
//   R = (f_ε, θ) + η(φ_t, me) + ∫β_ε(φ)·me - (π(φ), φ_t - me) - (θ, me) + η(φ_t, φ)
// where me = m(v0)e^{-t/τ}. The residual column is the trapezoid-integrated
// defect E(t) - E(0) + ∫(D - R).
struct EnergyLedger {
    std::vector<double> times;
    std::vector<double> e_theta, e_inertia, e_grad_phi, e_envelope, e_lambda_tau, e_eta_phi;
    std::vector<double> d_grad_theta, d_lambda_theta, d_dual_phi_t, d_eta_phi_t, d_lambda_phi_t;
    std::vector<double> work;     // sum of right-hand-side work terms
    std::vector<double> residual; // time-integrated identity defect at t_k
    double sup_residual = 0.0;
    double min_dissipation = 0.0; // most negative dissipation entry seen
};

EnergyLedger energy_ledger(const Trajectory& traj, const Params& p, const InitialData& data);

// Sup/L² aggregates of the uniformly bounded quantities (dual norms via ‖·‖_*).
struct AprioriMonitor {
    double theta_linf_h = 0.0;        // ‖θ‖_{L∞(0,T;H)}
    double grad_theta_l2 = 0.0;       // ‖∇θ‖_{L²(0,T;H)}
    double phi_t_l2h_eta = 0.0;       // η^{1/2}‖φ_t‖_{L²(0,T;H)}
    double phi_t_linf_dual_tau = 0.0; // τ^{1/2}‖φ_t‖_{L∞(0,T;V*)}
    double phi_t_l2_dual = 0.0;       // ‖φ_t‖_{L²(0,T;V*)}
    double grad_phi_linf = 0.0;       // ‖∇φ‖_{L∞(0,T;H)}
    double envelope_linf_l1 = 0.0;    // ‖β̂_ε(φ)‖_{L∞(0,T;L¹)}
    double mu_l2_dual = 0.0;          // ‖μ‖_{L²(0,T;V*)}
    double w_linf_v = 0.0;            // ‖w‖_{L∞(0,T;V)}
    double phi_t_sup_dual = 0.0;      // sup_t ‖φ_t‖_* (no τ weight)
};

AprioriMonitor apriori_monitor(const Trajectory& traj, const Params& p);

// Residual fields of the three weak equations at interior samples, with time
// derivatives reconstructed by centered differences; aggregated in ‖·‖_*.
struct WeakResiduals {
    double r1_sup_dual = 0.0, r2_sup_dual = 0.0, r3_sup_dual = 0.0;
    double r1_l2_dual = 0.0, r2_l2_dual = 0.0, r3_l2_dual = 0.0;
};

WeakResiduals weak_residual(const Trajectory& traj, const Params& p, const InitialData& data);

// Trapezoid quadrature of y(t) on the trajectory grid.
double trapezoid(const std::vector<double>& times, const std::vector<double>& y);

} // namespace pfcs
