#include "pfcs/system.hpp"

#include <cmath>

namespace pfcs {

void Params::validate() const {
    if (!(tau == 0.0 || (tau > 0.0 && tau <= 1.0)))
        throw ConfigError("tau must be 0 or in (0, 1]", "params.tau");
    if (!(eta >= 0.0 && eta <= 1.0))
        throw ConfigError("eta must be in [0, 1]", "params.eta");
    if (!(eps > 0.0 && eps <= 1.0))
        throw ConfigError("eps must be in (0, 1]", "params.eps");
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw ConfigError("lambda must be in (0, 1]", "params.lambda");
    if (!beta.eval || !beta.primitive)
        throw ConfigError("beta is not set", "params.beta");
    if (!pi.eval) throw ConfigError("pi is not set", "params.pi");
}

Field apply_yosida(const ScalarMonotone& beta, double eps, const Field& u) {
    Field out(u.geom());
    for (int i = 0; i < u.size(); ++i) out[i] = yosida_scalar(beta, eps, u[i]);
    return out;
}

double envelope_integral(const ScalarMonotone& beta, double eps, const Field& u) {
    double s = 0.0;
    for (int i = 0; i < u.size(); ++i) s += moreau_scalar(beta, eps, u[i]);
    return s * u.geom().dx();
}

InitialData prepare_initial_data(const Params& p, const Field& theta0,
                                 const Field& phi0, const Field& v0,
                                 const TimeField& f, double t_final,
                                 int forcing_samples) {
    require_same_geom(theta0, phi0);
    require_same_geom(theta0, v0);

    InitialData data;
    data.theta0eps = mollify_elliptic(p.eps, theta0);
    data.phi0eps = mollify_elliptic(p.eps, phi0);
    data.v0eps = mollify_dual(p.eps, v0);
    data.theta0eps.set_tag("theta");
    data.phi0eps.set_tag("phi");
    data.v0eps.set_tag("v");
    if (f.is_zero()) {
        data.f_eps = TimeField::zero();
    } else if (!(t_final > 0.0)) {
        // degenerate horizon: only the elliptically mollified initial value
        const Field f0 = mollify_elliptic(p.eps, f.at(0.0, theta0.geom()));
        data.f_eps = TimeField::sampled({0.0, 1.0}, {f0, f0});
    } else {
        const int ns = forcing_samples >= 2 ? forcing_samples : 257;
        data.f_eps = mollify_forcing(p.eps, f, theta0.geom(), t_final, ns);
    }
    data.m_phi0 = mean(phi0);
    data.m_v0 = mean(v0);
    data.m0 = p.tau * data.m_v0 + data.m_phi0;
    return data;
}

State make_initial_state(const InitialData& data) {
    State s;
    s.theta = data.theta0eps;
    s.phi = data.phi0eps;
    s.w = Field(data.phi0eps.geom(), 0.0, "w");
    s.t = 0.0;
    return s;
}

StateRate vector_field(const Params& p, const InitialData& data, const State& s) {
    if (p.tau == 0.0)
        throw DomainError("vector_field requires tau > 0; use limit_vector_field");
    require_same_geom(s.theta, s.phi);
    require_same_geom(s.theta, s.w);

    StateRate rate;
    // φ_t = (1/τ)(τ v_{0ε} + φ_{0ε} - φ - (-Δ_N)_λ w)
    rate.phi_t = data.phi0eps;
    rate.phi_t.add_scaled(data.v0eps, p.tau);
    rate.phi_t -= s.phi;
    rate.phi_t -= yosida_neumann(p.lambda, s.w);
    rate.phi_t *= 1.0 / p.tau;

    rate.w_t = recover_mu(p, s, rate.phi_t);

    // θ_t = f_ε - φ_t - (-Δ_N)_λ θ
    rate.theta_t = data.f_eps.at(s.t, s.theta.geom());
    rate.theta_t -= rate.phi_t;
    rate.theta_t -= yosida_neumann(p.lambda, s.theta);
    return rate;
}

Field recover_mu(const Params& p, const State& s, const Field& phi_t) {
    Field mu = yosida_neumann(p.lambda, s.phi);
    mu += apply_yosida(p.beta, p.eps, s.phi);
    for (int i = 0; i < mu.size(); ++i) mu[i] += p.pi.eval(s.phi[i]);
    mu -= s.theta;
    mu.add_scaled(phi_t, p.eta);
    mu.set_tag("mu");
    return mu;
}

StateRate limit_vector_field(const Params& p, const InitialData& data, const State& s) {
    if (p.tau != 0.0)
        throw DomainError("limit_vector_field requires tau = 0");

    // μ with the viscous part removed: (-Δ_N)_λφ + β_ε(φ) + π(φ) - θ.
    Field mu_core = yosida_neumann(p.lambda, s.phi);
    mu_core += apply_yosida(p.beta, p.eps, s.phi);
    for (int i = 0; i < mu_core.size(); ++i) mu_core[i] += p.pi.eval(s.phi[i]);
    mu_core -= s.theta;

    Field rhs = yosida_neumann(p.lambda, mu_core);
    rhs *= -1.0;

    StateRate rate;
    if (p.eta == 0.0) {
        rate.phi_t = rhs;
    } else {
        // (I + η(-Δ_N)_λ) x = rhs  ⇔  (I + (λ+η)A) x = rhs + λ A rhs,
        // a single tridiagonal solve. The solve preserves the (zero) mean.
        Field b = rhs;
        b.add_scaled(neg_laplacian(rhs), p.lambda);
        rate.phi_t = solve_shifted_neumann(p.lambda + p.eta, b);
    }

    rate.w_t = recover_mu(p, s, rate.phi_t);

    rate.theta_t = data.f_eps.at(s.t, s.theta.geom());
    rate.theta_t -= rate.phi_t;
    rate.theta_t -= yosida_neumann(p.lambda, s.theta);
    return rate;
}

StateRate field_eval(const Params& p, const InitialData& data, const State& s) {
    return p.tau == 0.0 ? limit_vector_field(p, data, s) : vector_field(p, data, s);
}

double state_norm(const State& a) {
    return std::sqrt(inner_h(a.theta, a.theta) + inner_h(a.phi, a.phi) +
                     inner_h(a.w, a.w));
}

double rate_norm(const StateRate& r) {
    return std::sqrt(inner_h(r.theta_t, r.theta_t) + inner_h(r.phi_t, r.phi_t) +
                     inner_h(r.w_t, r.w_t));
}

} // namespace pfcs
