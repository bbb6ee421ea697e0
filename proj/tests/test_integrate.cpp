#include <doctest.h>

#include <cmath>
#include <random>

#include "pfcs/integrate.hpp"

using namespace pfcs;

namespace {

Params default_params() {
    Params p;
    p.tau = 0.5;
    p.eta = 0.5;
    p.eps = 0.1;
    p.lambda = 0.1;
    p.beta = monotone_by_name("cubic");
    p.pi = perturbation_by_name("negative_identity");
    return p;
}

State constant_state(const GridGeom& g, double a, double b, double c) {
    State s;
    s.theta = Field(g, a);
    s.phi = Field(g, b);
    s.w = Field(g, c);
    s.t = 0.0;
    return s;
}

double state_dist(const State& a, const State& b) {
    State d = a;
    d.theta -= b.theta;
    d.phi -= b.phi;
    d.w -= b.w;
    return state_norm(d);
}

const FieldEval zero_eval = [](double, const State& s) {
    StateRate r;
    r.theta_t = Field(s.theta.geom());
    r.phi_t = Field(s.theta.geom());
    r.w_t = Field(s.theta.geom());
    return r;
};

const FieldEval decay_eval = [](double, const State& s) {
    StateRate r;
    r.theta_t = -1.0 * s.theta;
    r.phi_t = -1.0 * s.phi;
    r.w_t = -1.0 * s.w;
    return r;
};

} // namespace

TEST_CASE("steppers leave the state unchanged under a zero field") {
    const GridGeom g{16, 1.0};
    const State s = constant_state(g, 0.3, -0.7, 1.1);
    const State r1 = step_rk4(zero_eval, 0.0, 0.1, s);
    const State r2 = step_picard_midpoint(zero_eval, 0.0, 0.1, s, 1e-13, 50);
    for (int i = 0; i < g.n_cells; ++i) {
        CHECK(r1.theta[i] == s.theta[i]);
        CHECK(r1.phi[i] == s.phi[i]);
        CHECK(r1.w[i] == s.w[i]);
        CHECK(r2.theta[i] == s.theta[i]);
        CHECK(r2.phi[i] == s.phi[i]);
        CHECK(r2.w[i] == s.w[i]);
    }
}

TEST_CASE("rk4 on y' = -y reproduces the degree-4 stability polynomial") {
    const GridGeom g{8, 1.0};
    const double dt = 0.3;
    const State s = constant_state(g, 1.0, 1.0, 1.0);
    const State out = step_rk4(decay_eval, 0.0, dt, s);
    const double poly =
        1.0 - dt + dt * dt / 2.0 - dt * dt * dt / 6.0 + dt * dt * dt * dt / 24.0;
    for (int i = 0; i < g.n_cells; ++i)
        CHECK(out.theta[i] == doctest::Approx(poly).epsilon(1e-15));
}

TEST_CASE("implicit midpoint on y' = -y matches its rational stability function") {
    const GridGeom g{8, 1.0};
    const double dt = 0.3;
    const State s = constant_state(g, 1.0, 1.0, 1.0);
    const State out = step_picard_midpoint(decay_eval, 0.0, dt, s, 1e-14, 200);
    const double rat = (1.0 - dt / 2.0) / (1.0 + dt / 2.0);
    for (int i = 0; i < g.n_cells; ++i)
        CHECK(out.phi[i] == doctest::Approx(rat).epsilon(1e-12));
}

TEST_CASE("midpoint mean of phi equals the scalar implicit-midpoint recurrence") {
    const GridGeom g{32, 1.0};
    const Params p = default_params();
    const Field theta0 = cosine_mode(g, 1, 0.3, 0.05);
    const Field phi0 = cosine_mode(g, 1, 0.5, 0.3);
    const Field v0 = cosine_mode(g, 1, 0.3, 0.2);
    const InitialData data =
        prepare_initial_data(p, theta0, phi0, v0, TimeField::zero(), 1.0);

    const double dt = 0.01;
    const int n_steps = 50;
    StepControls ctl;
    ctl.picard_tol = 1e-14;
    ctl.picard_max_iter = 200;
    const Trajectory traj = integrate(p, data, make_initial_state(data), dt, n_steps,
                                      Scheme::picard_midpoint, ctl);

    // scalar recurrence for tau y' + y = m0
    double y = data.m_phi0;
    for (int k = 0; k < n_steps; ++k) {
        y = (y * (1.0 - dt / (2.0 * p.tau)) + dt * data.m0 / p.tau) /
            (1.0 + dt / (2.0 * p.tau));
        CHECK(std::abs(mean(traj.states[static_cast<size_t>(k) + 1].phi) - y) <= 1e-12);
    }
}

TEST_CASE("rk4 self-refinement: global order 4 on the regularized system") {
    const GridGeom g{32, 1.0};
    const Params p = default_params();
    const Field theta0 = cosine_mode(g, 1, 0.3, 0.05);
    const Field phi0 = cosine_mode(g, 1, 0.5, 0.3);
    const Field v0 = cosine_mode(g, 1, 0.3, 0.2);
    const double t_final = 0.1;
    const InitialData data =
        prepare_initial_data(p, theta0, phi0, v0, TimeField::zero(), t_final);

    auto run = [&](int n) {
        return integrate(p, data, make_initial_state(data), t_final / n, n, Scheme::rk4);
    };
    const Trajectory coarse = run(25), mid = run(50), ref = run(25 * 16);
    const double e1 = state_dist(coarse.states.back(), ref.states.back());
    const double e2 = state_dist(mid.states.back(), ref.states.back());
    const double order = std::log2(e1 / e2);
    CHECK(order >= 3.7);
    CHECK(order <= 4.3);
}

TEST_CASE("picard midpoint self-refinement: global order 2") {
    const GridGeom g{32, 1.0};
    const Params p = default_params();
    const Field theta0 = cosine_mode(g, 1, 0.3, 0.05);
    const Field phi0 = cosine_mode(g, 1, 0.5, 0.3);
    const Field v0 = cosine_mode(g, 1, 0.3, 0.2);
    const double t_final = 0.1;
    const InitialData data =
        prepare_initial_data(p, theta0, phi0, v0, TimeField::zero(), t_final);

    StepControls ctl;
    ctl.picard_tol = 1e-13;
    auto run = [&](int n) {
        return integrate(p, data, make_initial_state(data), t_final / n, n,
                         Scheme::picard_midpoint, ctl);
    };
    const Trajectory coarse = run(25), mid = run(50), ref = run(25 * 16);
    const double e1 = state_dist(coarse.states.back(), ref.states.back());
    const double e2 = state_dist(mid.states.back(), ref.states.back());
    const double order = std::log2(e1 / e2);
    CHECK(order >= 1.8);
    CHECK(order <= 2.2);
}

TEST_CASE("lipschitz_estimate: unit scales, monotone growth, tau = 0 variant") {
    Params p = default_params();
    p.tau = p.eta = p.eps = p.lambda = 1.0;
    const double k_unit = lipschitz_estimate(p);
    CHECK(k_unit > 1.0);
    CHECK(k_unit < 20.0); // a fixed constant when every scale is 1

    Params ph = p;
    ph.lambda = 0.5;
    CHECK(lipschitz_estimate(ph) >= k_unit + 1.0 / p.lambda);

    Params p0 = default_params();
    p0.tau = 0.0;
    CHECK_THROWS_AS(lipschitz_estimate(p0), UsageError);
    CHECK(limit_lipschitz_estimate(p0) > 0.0);

    CHECK(guarded_dt(default_params(), 1e-3, Scheme::rk4) == 1e-3);
    CHECK(guarded_dt(default_params(), 1.0, Scheme::rk4) ==
          doctest::Approx(2.5 / lipschitz_estimate(default_params())));
}

TEST_CASE("rk4 stability guard rejects oversized steps with the bound attached") {
    const GridGeom g{16, 1.0};
    const Params p = default_params();
    const Field zero(g, 0.0);
    const InitialData data =
        prepare_initial_data(p, zero, cosine_mode(g, 1, 0.4, 0.2), zero,
                             TimeField::zero(), 1.0);
    const double guard = 2.5 / lipschitz_estimate(p);
    try {
        integrate(p, data, make_initial_state(data), 10.0 * guard, 3, Scheme::rk4);
        FAIL("expected StepRejected");
    } catch (const StepRejected& e) {
        CHECK(e.dt == doctest::Approx(10.0 * guard));
        CHECK(e.bound == doctest::Approx(guard));
    }
}

TEST_CASE("integrate with zero steps returns only the initial sample") {
    const GridGeom g{16, 1.0};
    const Params p = default_params();
    const Field zero(g, 0.0);
    const InitialData data =
        prepare_initial_data(p, zero, zero, zero, TimeField::zero(), 1.0);
    const Trajectory traj =
        integrate(p, data, make_initial_state(data), 0.1, 0, Scheme::picard_midpoint);
    CHECK(traj.n_samples() == 1);
    CHECK(traj.times[0] == 0.0);
}

TEST_CASE("homogeneous rest state stays at rest for all steps") {
    const GridGeom g{16, 1.0};
    const Params p = default_params();
    const Field zero(g, 0.0);
    const InitialData data =
        prepare_initial_data(p, zero, zero, zero, TimeField::zero(), 1.0);
    for (Scheme sch : {Scheme::rk4, Scheme::picard_midpoint}) {
        const Trajectory traj = integrate(p, data, make_initial_state(data), 0.01, 40, sch);
        for (const State& s : traj.states) {
            CHECK(norm_h(s.theta) == 0.0);
            CHECK(norm_h(s.phi) == 0.0);
            CHECK(norm_h(s.w) == 0.0);
        }
    }
}

TEST_CASE("picard fails past the contraction bound; newton fallback recovers") {
    const GridGeom g{16, 1.0};
    Params p = default_params();
    p.lambda = 0.02;
    p.eps = 0.02;
    p.tau = 0.05;
    const Field theta0 = cosine_mode(g, 1, 0.3, 0.05);
    const Field phi0 = cosine_mode(g, 1, 0.5, 0.3);
    const Field v0 = cosine_mode(g, 1, 0.3, 0.2);
    const InitialData data =
        prepare_initial_data(p, theta0, phi0, v0, TimeField::zero(), 1.0);
    const State s0 = make_initial_state(data);

    const double k_est = lipschitz_estimate(p);
    const double dt = 8.0 / k_est; // well past dt·K < 1

    const FieldEval f = [&](double t, const State& s) {
        State x = s;
        x.t = t;
        return vector_field(p, data, x);
    };

    try {
        step_picard_midpoint(f, 0.0, dt, s0, 1e-12, 40, /*newton_fallback=*/false);
        FAIL("expected SolverError");
    } catch (const SolverError& e) {
        CHECK(e.residual_history.size() > 3);
    }

    PicardStats stats;
    const State out = step_picard_midpoint(f, 0.0, dt, s0, 1e-12, 40, true, &stats);
    CHECK(stats.used_newton);
    // Independent check that the midpoint equation holds.
    State mid = s0;
    mid.theta.add_scaled(out.theta, 1.0);
    mid.phi.add_scaled(out.phi, 1.0);
    mid.w.add_scaled(out.w, 1.0);
    mid.theta *= 0.5;
    mid.phi *= 0.5;
    mid.w *= 0.5;
    const StateRate r = f(0.5 * dt, mid);
    State expect = s0;
    expect.theta.add_scaled(r.theta_t, dt);
    expect.phi.add_scaled(r.phi_t, dt);
    expect.w.add_scaled(r.w_t, dt);
    CHECK(state_dist(out, expect) <= 1e-10 * (1.0 + state_norm(s0)));
}

TEST_CASE("identical inputs give bitwise-identical trajectories") {
    const GridGeom g{24, 1.0};
    const Params p = default_params();
    const Field theta0 = cosine_mode(g, 1, 0.3, 0.05);
    const Field phi0 = cosine_mode(g, 1, 0.5, 0.3);
    const Field v0 = cosine_mode(g, 1, 0.3, 0.2);
    const InitialData data =
        prepare_initial_data(p, theta0, phi0, v0, TimeField::zero(), 0.1);
    const Trajectory a =
        integrate(p, data, make_initial_state(data), 1e-3, 100, Scheme::picard_midpoint);
    const Trajectory b =
        integrate(p, data, make_initial_state(data), 1e-3, 100, Scheme::picard_midpoint);
    REQUIRE(a.n_samples() == b.n_samples());
    for (int k = 0; k < a.n_samples(); ++k)
        for (int i = 0; i < g.n_cells; ++i) {
            CHECK(a.states[static_cast<size_t>(k)].theta[i] ==
                  b.states[static_cast<size_t>(k)].theta[i]);
            CHECK(a.states[static_cast<size_t>(k)].phi[i] ==
                  b.states[static_cast<size_t>(k)].phi[i]);
            CHECK(a.states[static_cast<size_t>(k)].w[i] ==
                  b.states[static_cast<size_t>(k)].w[i]);
            CHECK(a.mu[static_cast<size_t>(k)][i] == b.mu[static_cast<size_t>(k)][i]);
        }
}
