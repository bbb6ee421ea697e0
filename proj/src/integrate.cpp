#include "pfcs/integrate.hpp"

#include <algorithm>
#include <cmath>

#include "pfcs/linalg.hpp"

namespace pfcs {

Scheme scheme_by_name(const std::string& name) {
    if (name == "rk4") return Scheme::rk4;
    if (name == "picard_midpoint") return Scheme::picard_midpoint;
    throw ConfigError("unknown scheme '" + name + "'", "scheme");
}

std::string scheme_name(Scheme s) {
    return s == Scheme::rk4 ? "rk4" : "picard_midpoint";
}

namespace {

State add_scaled(const State& s, const StateRate& r, double c, double t_new) {
    State out = s;
    out.theta.add_scaled(r.theta_t, c);
    out.phi.add_scaled(r.phi_t, c);
    out.w.add_scaled(r.w_t, c);
    out.t = t_new;
    return out;
}

StateRate rate_combine(const StateRate& k1, const StateRate& k2,
                       const StateRate& k3, const StateRate& k4) {
    StateRate out = k1;
    out.theta_t.add_scaled(k2.theta_t, 2.0);
    out.theta_t.add_scaled(k3.theta_t, 2.0);
    out.theta_t += k4.theta_t;
    out.phi_t.add_scaled(k2.phi_t, 2.0);
    out.phi_t.add_scaled(k3.phi_t, 2.0);
    out.phi_t += k4.phi_t;
    out.w_t.add_scaled(k2.w_t, 2.0);
    out.w_t.add_scaled(k3.w_t, 2.0);
    out.w_t += k4.w_t;
    return out;
}

double state_dist(const State& a, const State& b) {
    State d = a;
    d.theta -= b.theta;
    d.phi -= b.phi;
    d.w -= b.w;
    return state_norm(d);
}

std::vector<double> flatten(const State& s) {
    std::vector<double> x;
    x.reserve(static_cast<size_t>(3 * s.theta.size()));
    for (double v : s.theta.values()) x.push_back(v);
    for (double v : s.phi.values()) x.push_back(v);
    for (double v : s.w.values()) x.push_back(v);
    return x;
}

State unflatten(const std::vector<double>& x, const GridGeom& g, double t) {
    const int n = g.n_cells;
    State s{Field(g, 0.0, "theta"), Field(g, 0.0, "phi"), Field(g, 0.0, "w"), t};
    for (int i = 0; i < n; ++i) {
        s.theta[i] = x[static_cast<size_t>(i)];
        s.phi[i] = x[static_cast<size_t>(n + i)];
        s.w[i] = x[static_cast<size_t>(2 * n + i)];
    }
    return s;
}

// Modified Newton on G(X) = X - s - dt f(t_mid, (s+X)/2) with one
// finite-difference Jacobian, factored once.
State newton_midpoint(const FieldEval& f, double t, double dt, const State& s,
                      const State& guess, double tol, int max_iter,
                      std::vector<double>& history) {
    const GridGeom g = s.theta.geom();
    const int n3 = 3 * g.n_cells;
    const double t_mid = t + 0.5 * dt;
    const std::vector<double> xs = flatten(s);

    auto midpoint_rate = [&](const std::vector<double>& x) {
        std::vector<double> xm(x.size());
        for (size_t i = 0; i < x.size(); ++i) xm[i] = 0.5 * (x[i] + xs[i]);
        const StateRate r = f(t_mid, unflatten(xm, g, t_mid));
        std::vector<double> out = flatten(State{r.theta_t, r.phi_t, r.w_t, t_mid});
        return out;
    };
    auto residual = [&](const std::vector<double>& x) {
        std::vector<double> r = midpoint_rate(x);
        for (int i = 0; i < n3; ++i)
            r[static_cast<size_t>(i)] = x[static_cast<size_t>(i)] - xs[static_cast<size_t>(i)] - dt * r[static_cast<size_t>(i)];
        return r;
    };

    std::vector<double> x = flatten(guess);
    const double dx_weight = std::sqrt(g.dx());
    const double scale = std::max(1.0, state_norm(s));

    // J_G = I - (dt/2) J_f at the initial iterate.
    DenseMatrix jac(n3, n3);
    {
        const std::vector<double> base = midpoint_rate(x);
        for (int j = 0; j < n3; ++j) {
            const double h = 1e-7 * std::max(1.0, std::abs(x[static_cast<size_t>(j)]));
            std::vector<double> xp = x;
            xp[static_cast<size_t>(j)] += h;
            const std::vector<double> rp = midpoint_rate(xp);
            for (int i = 0; i < n3; ++i)
                jac(i, j) = (i == j ? 1.0 : 0.0) - dt * (rp[static_cast<size_t>(i)] - base[static_cast<size_t>(i)]) / h;
        }
    }
    const LuFactors lu = lu_factor(std::move(jac));

    for (int it = 0; it < max_iter; ++it) {
        std::vector<double> res = residual(x);
        double rn = 0.0;
        for (double v : res) rn += v * v;
        rn = std::sqrt(rn) * dx_weight;
        history.push_back(rn);
        if (rn <= tol * scale) return unflatten(x, g, t + dt);
        const std::vector<double> dxv = lu_solve(lu, std::move(res));
        for (int i = 0; i < n3; ++i) x[static_cast<size_t>(i)] -= dxv[static_cast<size_t>(i)];
    }
    throw SolverError("newton_midpoint: no convergence", history.back(),
                      max_iter, history);
}

} // namespace

State step_rk4(const FieldEval& f, double t, double dt, const State& s, double dt_max) {
    if (dt > dt_max * (1.0 + 1e-12)) throw StepRejected(dt, dt_max);
    const StateRate k1 = f(t, s);
    const StateRate k2 = f(t + 0.5 * dt, add_scaled(s, k1, 0.5 * dt, t + 0.5 * dt));
    const StateRate k3 = f(t + 0.5 * dt, add_scaled(s, k2, 0.5 * dt, t + 0.5 * dt));
    const StateRate k4 = f(t + dt, add_scaled(s, k3, dt, t + dt));
    const StateRate sum = rate_combine(k1, k2, k3, k4);
    return add_scaled(s, sum, dt / 6.0, t + dt);
}

State step_picard_midpoint(const FieldEval& f, double t, double dt, const State& s,
                           double tol, int max_iter, bool newton_fallback,
                           PicardStats* stats) {
    const double t_mid = t + 0.5 * dt;
    const double scale = std::max(1.0, state_norm(s));
    std::vector<double> history;

    State x = s;
    double best = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iter; ++it) {
        State mid = s;
        mid.theta.add_scaled(x.theta, 1.0);
        mid.phi.add_scaled(x.phi, 1.0);
        mid.w.add_scaled(x.w, 1.0);
        mid.theta *= 0.5;
        mid.phi *= 0.5;
        mid.w *= 0.5;
        mid.t = t_mid;
        const StateRate r = f(t_mid, mid);
        State next = add_scaled(s, r, dt, t + dt);
        const double delta = state_dist(next, x);
        history.push_back(delta);
        x = std::move(next);
        if (delta <= tol * scale) {
            if (stats) {
                stats->iterations = it + 1;
                stats->used_newton = false;
                stats->residual_history = std::move(history);
            }
            return x;
        }
        // Stop early when the iteration is clearly expanding.
        if (delta > 10.0 * best && it > 3) break;
        best = std::min(best, delta);
    }

    if (newton_fallback) {
        State out = newton_midpoint(f, t, dt, s, x, tol, 50, history);
        if (stats) {
            stats->iterations = static_cast<int>(history.size());
            stats->used_newton = true;
            stats->residual_history = std::move(history);
        }
        return out;
    }
    throw SolverError("step_picard_midpoint: fixed point did not contract",
                      history.back(), static_cast<int>(history.size()), history);
}

double lipschitz_estimate(const Params& p) {
    if (!(p.tau > 0.0))
        throw UsageError("lipschitz_estimate: requires tau > 0");
    const double a = 1.0 / p.lambda;
    const double b = 1.0 / p.tau;
    const double c = 1.0 / p.eps;
    const double lp = p.pi.lipschitz_constant;
    const double m[3][3] = {
        {a, b, b * a},
        {0.0, b, b * a},
        {1.0, p.eta * b + a + c + lp, p.eta * b * a},
    };
    double fro = 0.0;
    for (const auto& row : m)
        for (double v : row) fro += v * v;
    return std::sqrt(fro);
}

double limit_lipschitz_estimate(const Params& p) {
    const double a = 1.0 / p.lambda;
    const double g = a + 1.0 / p.eps + p.pi.lipschitz_constant;
    const double m[3][3] = {
        {2.0 * a, a * g, 0.0},
        {a, a * g, 0.0},
        {1.0 + p.eta * a, (1.0 + p.eta * a) * g, 0.0},
    };
    double fro = 0.0;
    for (const auto& row : m)
        for (double v : row) fro += v * v;
    return std::sqrt(fro);
}

double rk4_guard_dt(double lipschitz) { return 2.5 / lipschitz; }
double picard_guard_dt(double lipschitz) { return 0.5 / lipschitz; }

double guarded_dt(const Params& p, double dt_target, Scheme scheme) {
    const double k = p.tau == 0.0 ? limit_lipschitz_estimate(p) : lipschitz_estimate(p);
    const double guard = scheme == Scheme::rk4 ? rk4_guard_dt(k) : picard_guard_dt(k);
    return std::min(dt_target, guard);
}

Trajectory integrate(const Params& p, const InitialData& data, const State& s0,
                     double dt, int n_steps, Scheme scheme,
                     const StepControls& controls, const StepHook& hook) {
    p.validate();
    if (!(dt > 0.0)) throw UsageError("integrate: dt must be > 0");
    if (n_steps < 0) throw UsageError("integrate: n_steps must be >= 0");

    const FieldEval f = [&](double t, const State& s) {
        State x = s;
        x.t = t;
        return field_eval(p, data, x);
    };

    const double k = p.tau == 0.0 ? limit_lipschitz_estimate(p) : lipschitz_estimate(p);
    const double rk4_max = std::min(controls.rk4_dt_max, rk4_guard_dt(k));

    Trajectory traj;
    traj.params = p;
    traj.dt = dt;
    traj.scheme = scheme;
    traj.times.reserve(static_cast<size_t>(n_steps) + 1);
    traj.states.reserve(static_cast<size_t>(n_steps) + 1);
    traj.mu.reserve(static_cast<size_t>(n_steps) + 1);

    State s = s0;
    const double t0 = s0.t;
    {
        const StateRate r0 = f(t0, s);
        traj.times.push_back(t0);
        traj.states.push_back(s);
        traj.mu.push_back(r0.w_t);
        if (hook) hook(0, s, r0);
    }

    for (int step = 1; step <= n_steps; ++step) {
        const double t = t0 + (step - 1) * dt;
        if (scheme == Scheme::rk4) {
            s = step_rk4(f, t, dt, s, rk4_max);
        } else {
            s = step_picard_midpoint(f, t, dt, s, controls.picard_tol,
                                     controls.picard_max_iter,
                                     controls.newton_fallback);
        }
        s.t = t0 + step * dt;
        const StateRate r = f(s.t, s);
        traj.times.push_back(s.t);
        traj.states.push_back(s);
        traj.mu.push_back(r.w_t);
        if (hook) hook(step, s, r);
    }
    return traj;
}

} // namespace pfcs
