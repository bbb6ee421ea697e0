#include "pfcs/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace pfcs {

double trapezoid(const std::vector<double>& times, const std::vector<double>& y) {
    if (times.size() != y.size()) throw UsageError("trapezoid: size mismatch");
    double s = 0.0;
    for (size_t k = 1; k < times.size(); ++k)
        s += 0.5 * (times[k] - times[k - 1]) * (y[k] + y[k - 1]);
    return s;
}

namespace {

Field phi_rate(const Trajectory& traj, const Params& p, const InitialData& data, int k) {
    // φ_t is a pure function of the state; re-derive it at sample k.
    const State& s = traj.states[static_cast<size_t>(k)];
    if (p.tau == 0.0) return limit_vector_field(p, data, s).phi_t;
    Field rate = data.phi0eps;
    rate.add_scaled(data.v0eps, p.tau);
    rate -= s.phi;
    rate -= yosida_neumann(p.lambda, s.w);
    rate *= 1.0 / p.tau;
    return rate;
}

} // namespace

MeanLawReport mean_laws(const Trajectory& traj, const Params& p, const InitialData& data) {
    if (!(p.tau > 0.0)) throw UsageError("mean_laws: requires a tau > 0 trajectory");
    MeanLawReport rep;
    rep.dt = traj.dt;
    const int n = traj.n_samples();
    rep.times = traj.times;
    rep.mean_phi.resize(static_cast<size_t>(n));
    rep.mean_phi_ref.resize(static_cast<size_t>(n));
    rep.mean_phi_t.resize(static_cast<size_t>(n));
    rep.mean_phi_t_ref.resize(static_cast<size_t>(n));
    rep.defect_phi.resize(static_cast<size_t>(n));
    rep.defect_phi_t.resize(static_cast<size_t>(n));

    for (int k = 0; k < n; ++k) {
        const double t = traj.times[static_cast<size_t>(k)];
        const double decay = std::exp(-t / p.tau);
        rep.mean_phi[static_cast<size_t>(k)] = mean(traj.states[static_cast<size_t>(k)].phi);
        rep.mean_phi_ref[static_cast<size_t>(k)] = data.m_phi0 * decay + data.m0 * (1.0 - decay);
        rep.mean_phi_t[static_cast<size_t>(k)] = mean(phi_rate(traj, p, data, k));
        rep.mean_phi_t_ref[static_cast<size_t>(k)] = data.m_v0 * decay;
        rep.defect_phi[static_cast<size_t>(k)] =
            std::abs(rep.mean_phi[static_cast<size_t>(k)] - rep.mean_phi_ref[static_cast<size_t>(k)]);
        rep.defect_phi_t[static_cast<size_t>(k)] =
            std::abs(rep.mean_phi_t[static_cast<size_t>(k)] - rep.mean_phi_t_ref[static_cast<size_t>(k)]);
        rep.sup_defect_phi = std::max(rep.sup_defect_phi, rep.defect_phi[static_cast<size_t>(k)]);
        rep.sup_defect_phi_t = std::max(rep.sup_defect_phi_t, rep.defect_phi_t[static_cast<size_t>(k)]);
    }
    return rep;
}

EnergyLedger energy_ledger(const Trajectory& traj, const Params& p, const InitialData& data) {
    if (!(p.tau > 0.0)) throw UsageError("energy_ledger: requires a tau > 0 trajectory");
    const int n = traj.n_samples();
    EnergyLedger led;
    led.times = traj.times;
    auto sized = [n](std::vector<double>& v) { v.resize(static_cast<size_t>(n), 0.0); };
    sized(led.e_theta); sized(led.e_inertia); sized(led.e_grad_phi);
    sized(led.e_envelope); sized(led.e_lambda_tau); sized(led.e_eta_phi);
    sized(led.d_grad_theta); sized(led.d_lambda_theta); sized(led.d_dual_phi_t);
    sized(led.d_eta_phi_t); sized(led.d_lambda_phi_t);
    sized(led.work); sized(led.residual);

    const GridGeom g = traj.states.front().theta.geom();
    led.min_dissipation = 0.0;

    std::vector<double> diss_total(static_cast<size_t>(n)), work_total(static_cast<size_t>(n));
    std::vector<double> energy(static_cast<size_t>(n));

    for (int k = 0; k < n; ++k) {
        const auto ks = static_cast<size_t>(k);
        const State& s = traj.states[ks];
        const double t = traj.times[ks];
        const double me = data.m_v0 * std::exp(-t / p.tau);
        const Field phi_t = phi_rate(traj, p, data, k);

        Field phi_t_shift = phi_t;
        phi_t_shift.shift(-me);

        const Field j_phi = resolvent_neumann(p.lambda, s.phi);
        const Field y_phi = yosida_neumann(p.lambda, s.phi);
        const Field j_theta = resolvent_neumann(p.lambda, s.theta);
        const Field y_theta = yosida_neumann(p.lambda, s.theta);

        // Stored energy terms.
        led.e_theta[ks] = 0.5 * inner_h(s.theta, s.theta);
        const double dn = dual_norm(phi_t_shift);
        led.e_inertia[ks] = 0.5 * p.tau * dn * dn;
        led.e_grad_phi[ks] = 0.5 * (grad_norm_sq(j_phi) + p.lambda * inner_h(y_phi, y_phi));
        led.e_envelope[ks] = envelope_integral(p.beta, p.eps, s.phi);
        led.e_lambda_tau[ks] = 0.5 * p.lambda * p.tau * inner_h(phi_t, phi_t);
        led.e_eta_phi[ks] = 0.5 * p.eta * inner_h(s.phi, s.phi);
        energy[ks] = led.e_theta[ks] + led.e_inertia[ks] + led.e_grad_phi[ks] +
                     led.e_envelope[ks] + led.e_lambda_tau[ks] + led.e_eta_phi[ks];

        // Dissipation terms (all squares).
        led.d_grad_theta[ks] = grad_norm_sq(j_theta);
        led.d_lambda_theta[ks] = p.lambda * inner_h(y_theta, y_theta);
        led.d_dual_phi_t[ks] = dn * dn;
        led.d_eta_phi_t[ks] = p.eta * inner_h(phi_t, phi_t);
        led.d_lambda_phi_t[ks] = p.lambda * inner_h(phi_t, phi_t);
        diss_total[ks] = led.d_grad_theta[ks] + led.d_lambda_theta[ks] +
                         led.d_dual_phi_t[ks] + led.d_eta_phi_t[ks] + led.d_lambda_phi_t[ks];
        led.min_dissipation = std::min({led.min_dissipation, led.d_grad_theta[ks],
                                        led.d_lambda_theta[ks], led.d_dual_phi_t[ks],
                                        led.d_eta_phi_t[ks], led.d_lambda_phi_t[ks]});

        // Right-hand-side work terms.
        const Field f_now = data.f_eps.at(t, g);
        Field beta_field(g);
        Field pi_field(g);
        for (int i = 0; i < g.n_cells; ++i) {
            beta_field[i] = yosida_scalar(p.beta, p.eps, s.phi[i]);
            pi_field[i] = p.pi.eval(s.phi[i]);
        }
        const Field ones(g, 1.0);
        double work = inner_h(f_now, s.theta);
        work += p.eta * me * inner_h(phi_t, ones);
        work += me * inner_h(beta_field, ones);
        work -= inner_h(pi_field, phi_t_shift);
        work -= me * inner_h(s.theta, ones);
        work += p.eta * inner_h(phi_t, s.phi);
        led.work[ks] = work;
        work_total[ks] = work;
    }

    // Residual of the time-integrated identity at each sample (running
    // trapezoid sums).
    double acc = 0.0;
    led.residual[0] = 0.0;
    for (int k = 1; k < n; ++k) {
        const auto ks = static_cast<size_t>(k);
        const double h = traj.times[ks] - traj.times[ks - 1];
        acc += 0.5 * h * ((diss_total[ks] - work_total[ks]) +
                          (diss_total[ks - 1] - work_total[ks - 1]));
        led.residual[ks] = energy[ks] - energy[0] + acc;
        led.sup_residual = std::max(led.sup_residual, std::abs(led.residual[ks]));
    }
    return led;
}

AprioriMonitor apriori_monitor(const Trajectory& traj, const Params& p) {
    AprioriMonitor mon;
    const int n = traj.n_samples();
    std::vector<double> grad_theta_sq(static_cast<size_t>(n));
    std::vector<double> phi_t_h_sq(static_cast<size_t>(n));
    std::vector<double> phi_t_dual_sq(static_cast<size_t>(n));
    std::vector<double> mu_dual_sq(static_cast<size_t>(n));

    // The monitor sees only the trajectory, so φ_t is reconstructed by
    // centered differences (one-sided at the ends); O(dt²), consistent with
    // the integrator accuracy.
    auto phi_t_at = [&](int k) {
        if (n == 1) return Field(traj.states[0].phi.geom());
        const int a = k > 0 ? k - 1 : 0;
        const int b = k + 1 < n ? k + 1 : n - 1;
        Field d = traj.states[static_cast<size_t>(b)].phi;
        d -= traj.states[static_cast<size_t>(a)].phi;
        d *= 1.0 / (traj.times[static_cast<size_t>(b)] - traj.times[static_cast<size_t>(a)]);
        return d;
    };

    for (int k = 0; k < n; ++k) {
        const auto ks = static_cast<size_t>(k);
        const State& s = traj.states[ks];
        mon.theta_linf_h = std::max(mon.theta_linf_h, norm_h(s.theta));
        grad_theta_sq[ks] = grad_norm_sq(s.theta);
        const Field pt = phi_t_at(k);
        phi_t_h_sq[ks] = inner_h(pt, pt);
        const double pd = dual_norm(pt);
        phi_t_dual_sq[ks] = pd * pd;
        mon.phi_t_sup_dual = std::max(mon.phi_t_sup_dual, pd);
        mon.grad_phi_linf = std::max(mon.grad_phi_linf, std::sqrt(grad_norm_sq(s.phi)));
        mon.envelope_linf_l1 =
            std::max(mon.envelope_linf_l1, envelope_integral(p.beta, p.eps, s.phi));
        const double md = dual_norm(traj.mu[ks]);
        mu_dual_sq[ks] = md * md;
        mon.w_linf_v = std::max(mon.w_linf_v, norm_v(s.w));
    }

    mon.grad_theta_l2 = std::sqrt(trapezoid(traj.times, grad_theta_sq));
    mon.phi_t_l2h_eta = std::sqrt(p.eta * trapezoid(traj.times, phi_t_h_sq));
    mon.phi_t_linf_dual_tau = std::sqrt(p.tau) * mon.phi_t_sup_dual;
    mon.phi_t_l2_dual = std::sqrt(trapezoid(traj.times, phi_t_dual_sq));
    mon.mu_l2_dual = std::sqrt(trapezoid(traj.times, mu_dual_sq));
    return mon;
}

WeakResiduals weak_residual(const Trajectory& traj, const Params& p, const InitialData& data) {
    const int n = traj.n_samples();
    if (n < 3) throw UsageError("weak_residual: need at least 3 samples");
    WeakResiduals res;
    const GridGeom g = traj.states.front().theta.geom();

    std::vector<double> times_int;
    std::vector<double> r1_sq, r2_sq, r3_sq;
    for (int k = 1; k + 1 < n; ++k) {
        const auto ks = static_cast<size_t>(k);
        const State& s = traj.states[ks];
        const double t = traj.times[ks];
        const double two_dt = traj.times[ks + 1] - traj.times[ks - 1];

        auto centered = [&](auto&& member) {
            Field d = member(traj.states[ks + 1]);
            d -= member(traj.states[ks - 1]);
            d *= 1.0 / two_dt;
            return d;
        };
        const Field theta_dot = centered([](const State& st) { return st.theta; });
        const Field phi_dot = centered([](const State& st) { return st.phi; });
        const Field w_dot = centered([](const State& st) { return st.w; });

        // r1 = θ_t + φ_t + (-Δ_N)_λθ - f_ε
        Field r1 = theta_dot;
        r1 += phi_dot;
        r1 += yosida_neumann(p.lambda, s.theta);
        r1 -= data.f_eps.at(t, g);

        // r2 = τφ_t + φ + (-Δ_N)_λw - τv_{0ε} - φ_{0ε}
        Field r2 = phi_dot;
        r2 *= p.tau;
        r2 += s.phi;
        r2 += yosida_neumann(p.lambda, s.w);
        r2 -= data.phi0eps;
        r2.add_scaled(data.v0eps, -p.tau);

        // r3 = ηφ_t + (-Δ_N)_λφ + β_ε(φ) + π(φ) - w_t - θ
        Field r3 = phi_dot;
        r3 *= p.eta;
        r3 += yosida_neumann(p.lambda, s.phi);
        r3 += apply_yosida(p.beta, p.eps, s.phi);
        for (int i = 0; i < g.n_cells; ++i) r3[i] += p.pi.eval(s.phi[i]);
        r3 -= w_dot;
        r3 -= s.theta;

        const double d1 = dual_norm(r1);
        const double d2 = dual_norm(r2);
        const double d3 = dual_norm(r3);
        res.r1_sup_dual = std::max(res.r1_sup_dual, d1);
        res.r2_sup_dual = std::max(res.r2_sup_dual, d2);
        res.r3_sup_dual = std::max(res.r3_sup_dual, d3);
        times_int.push_back(t);
        r1_sq.push_back(d1 * d1);
        r2_sq.push_back(d2 * d2);
        r3_sq.push_back(d3 * d3);
    }
    if (times_int.size() >= 2) {
        res.r1_l2_dual = std::sqrt(trapezoid(times_int, r1_sq));
        res.r2_l2_dual = std::sqrt(trapezoid(times_int, r2_sq));
        res.r3_l2_dual = std::sqrt(trapezoid(times_int, r3_sq));
    }
    return res;
}

} // namespace pfcs
