// system.hpp
// The regularized conserved phase-field system as a first-order ODE for
// U = (θ, φ, w) in the discrete space H³:
//
//   θ_t + φ_t + (-Δ_N)_λ θ = f_ε
//   τ φ_t + φ + (-Δ_N)_λ w = τ v_{0ε} + φ_{0ε}
//   η φ_t + (-Δ_N)_λ φ + β_ε(φ) + π(φ) = w_t + θ
//
// w(t) accumulates the chemical potential (w_t = μ); μ is always recovered
// from the third equation, never stored as primary state. The τ = 0 limit
// dynamics (conserved, with optional viscosity η) are provided as a separate
// vector field solving (I + η(-Δ_N)_λ) φ_t = -(-Δ_N)_λ[...].

#pragma once

#include "pfcs/data_prep.hpp"
#include "pfcs/grid.hpp"
#include "pfcs/scalar_ops.hpp"

namespace pfcs {

struct Params {
    double tau = 0.5;    // inertial coefficient; (0,1], or 0 for the limit field
    double eta = 0.5;    // viscosity, [0,1]
    double eps = 0.1;    // β-regularization, (0,1]
    double lambda = 0.1; // Laplacian regularization, (0,1]
    ScalarMonotone beta = monotone_by_name("cubic");
    LipschitzPerturbation pi = perturbation_by_name("negative_identity");

    void validate() const;
};

struct State {
    Field theta, phi, w;
    double t = 0.0;
};

struct StateRate {
    Field theta_t, phi_t, w_t;
};

struct InitialData {
    Field theta0eps, phi0eps, v0eps;
    TimeField f_eps;
    double m_phi0 = 0.0;
    double m_v0 = 0.0;
    double m0 = 0.0; // τ·m(v0) + m(φ0)
};

// Cellwise Yosida approximation β_ε(u).
Field apply_yosida(const ScalarMonotone& beta, double eps, const Field& u);
// Cellwise Moreau-Yosida envelope integral ∫ β̂_ε(u).
double envelope_integral(const ScalarMonotone& beta, double eps, const Field& u);

// Mollify raw data (θ0, φ0, v0, f) into InitialData: elliptic smoothing for
// the initial fields, parabolic smoothing for the forcing; means preserved
// exactly. A nonzero forcing is sampled on [0, t_final] with forcing_samples
// points (the run's own time grid when the caller passes it).
InitialData prepare_initial_data(const Params& p, const Field& theta0,
                                 const Field& phi0, const Field& v0,
                                 const TimeField& f, double t_final,
                                 int forcing_samples = 0);

State make_initial_state(const InitialData& data);

// Time derivative of U = (θ, φ, w) for τ > 0 (throws DomainError at τ = 0,
// use limit_vector_field). The w_t component is exactly recover_mu.
StateRate vector_field(const Params& p, const InitialData& data, const State& s);

// μ = η φ_t + (-Δ_N)_λ φ + β_ε(φ) + π(φ) - θ.
Field recover_mu(const Params& p, const State& s, const Field& phi_t);

// τ = 0 dynamics: solve (I + η(-Δ_N)_λ) φ_t = -(-Δ_N)_λ[(-Δ_N)_λφ + β_ε(φ)
// + π(φ) - θ] (direct evaluation when η = 0), then θ_t = f_ε - φ_t -
// (-Δ_N)_λθ. m(φ_t) = 0 exactly; w still accumulates μ for diagnostics.
StateRate limit_vector_field(const Params& p, const InitialData& data, const State& s);

// Dispatch on p.tau.
StateRate field_eval(const Params& p, const InitialData& data, const State& s);

// Euclidean norm on H³ used by the steppers and the Lipschitz checks.
double state_norm(const State& a);
double rate_norm(const StateRate& r);

} // namespace pfcs
