#include <doctest.h>

#include <cmath>
#include <random>

#include "pfcs/integrate.hpp"
#include "pfcs/system.hpp"

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

Field random_field(const GridGeom& g, std::mt19937& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Field f(g);
    for (int i = 0; i < g.n_cells; ++i) f[i] = dist(rng);
    return f;
}

double max_abs(const Field& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

} // namespace

TEST_CASE("Params::validate enforces the parameter ranges") {
    Params p = default_params();
    CHECK_NOTHROW(p.validate());
    p.tau = 0.0;
    CHECK_NOTHROW(p.validate());
    p.tau = -0.1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = default_params();
    p.eta = 1.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = default_params();
    p.eps = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = default_params();
    p.lambda = 1.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("vector_field: homogeneous rest point") {
    const GridGeom g{32, 1.0};
    const Params p = default_params();
    const Field zero(g, 0.0);
    const InitialData data =
        prepare_initial_data(p, zero, zero, zero, TimeField::zero(), 1.0);
    const State s = make_initial_state(data);
    const StateRate r = vector_field(p, data, s);
    CHECK(max_abs(r.theta_t) == 0.0);
    CHECK(max_abs(r.phi_t) == 0.0);
    CHECK(max_abs(r.w_t) == 0.0);
}

TEST_CASE("vector_field: constant fields reduce to scalar arithmetic") {
    const GridGeom g{24, 1.0};
    const Params p = default_params();
    const double a = 0.7, b = -0.4, c = 1.3, v = 0.2, gval = 0.5, h = 0.9;
    const InitialData data = prepare_initial_data(
        p, Field(g, 0.0), Field(g, gval), Field(g, v),
        TimeField::analytic([h](double, double) { return h; }), 1.0);

    State s;
    s.theta = Field(g, a);
    s.phi = Field(g, b);
    s.w = Field(g, c);
    s.t = 0.37;

    const StateRate r = vector_field(p, data, s);
    const double phi_t = (p.tau * v + gval - b) / p.tau; // Yosida of constants vanishes
    const double w_t = p.eta * phi_t + yosida_scalar(p.beta, p.eps, b) + p.pi.eval(b) - a;
    const double theta_t = h - phi_t;
    for (int i = 0; i < g.n_cells; ++i) {
        CHECK(r.phi_t[i] == doctest::Approx(phi_t).epsilon(1e-12));
        CHECK(r.w_t[i] == doctest::Approx(w_t).epsilon(1e-12));
        CHECK(r.theta_t[i] == doctest::Approx(theta_t).epsilon(1e-12));
    }
}

TEST_CASE("vector_field: the mean of phi_t reproduces the scalar mean ODE exactly") {
    const GridGeom g{48, 2.0};
    const Params p = default_params();
    std::mt19937 rng(17);
    const InitialData data =
        prepare_initial_data(p, random_field(g, rng), random_field(g, rng),
                             random_field(g, rng), TimeField::zero(), 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        State s;
        s.theta = random_field(g, rng);
        s.phi = random_field(g, rng);
        s.w = random_field(g, rng);
        s.t = 0.0;
        const StateRate r = vector_field(p, data, s);
        const double expected = (p.tau * data.m_v0 + data.m_phi0 - mean(s.phi)) / p.tau;
        CHECK(mean(r.phi_t) == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("InitialData: m0 is recomputable from the mollified fields") {
    const GridGeom g{40, 2.0};
    for (double tau : {1.0, 0.5, 0.125}) {
        Params p = default_params();
        p.tau = tau;
        std::mt19937 rng(5);
        const Field theta0 = random_field(g, rng);
        const Field phi0 = random_field(g, rng);
        const Field v0 = random_field(g, rng);
        const InitialData data =
            prepare_initial_data(p, theta0, phi0, v0, TimeField::zero(), 1.0);
        CHECK(std::abs(data.m0 - (p.tau * mean(data.v0eps) + mean(data.phi0eps))) <= 1e-12);
        CHECK(data.m_phi0 == doctest::Approx(mean(phi0)).epsilon(1e-14));
        CHECK(data.m_v0 == doctest::Approx(mean(v0)).epsilon(1e-14));
    }
}

TEST_CASE("recover_mu coincides bitwise with the w_t component") {
    const GridGeom g{32, 1.0};
    const Params p = default_params();
    std::mt19937 rng(19);
    const InitialData data =
        prepare_initial_data(p, random_field(g, rng), random_field(g, rng),
                             random_field(g, rng), TimeField::zero(), 1.0);
    State s;
    s.theta = random_field(g, rng);
    s.phi = random_field(g, rng);
    s.w = random_field(g, rng);
    s.t = 0.0;
    const StateRate r = vector_field(p, data, s);
    const Field mu = recover_mu(p, s, r.phi_t);
    for (int i = 0; i < g.n_cells; ++i) CHECK(mu[i] == r.w_t[i]);
}

TEST_CASE("vector_field requires tau > 0; limit field requires tau = 0") {
    const GridGeom g{16, 1.0};
    Params p = default_params();
    const Field zero(g, 0.0);
    const InitialData data =
        prepare_initial_data(p, zero, zero, zero, TimeField::zero(), 1.0);
    const State s = make_initial_state(data);

    Params p0 = p;
    p0.tau = 0.0;
    CHECK_THROWS_AS(vector_field(p0, data, s), DomainError);
    CHECK_THROWS_AS(limit_vector_field(p, data, s), DomainError);
    CHECK_NOTHROW(limit_vector_field(p0, data, s));
}

TEST_CASE("limit_vector_field: zero state, exact zero mean of phi_t") {
    const GridGeom g{32, 1.0};
    Params p = default_params();
    p.tau = 0.0;
    const Field zero(g, 0.0);
    const InitialData zero_data =
        prepare_initial_data(p, zero, zero, zero, TimeField::zero(), 1.0);
    const StateRate r0 = limit_vector_field(p, zero_data, make_initial_state(zero_data));
    CHECK(max_abs(r0.phi_t) == 0.0);
    CHECK(max_abs(r0.theta_t) == 0.0);

    std::mt19937 rng(23);
    for (double eta : {0.0, 0.5}) {
        p.eta = eta;
        State s;
        s.theta = random_field(g, rng);
        s.phi = random_field(g, rng);
        s.w = Field(g, 0.0);
        s.t = 0.0;
        const StateRate r = limit_vector_field(p, zero_data, s);
        CHECK(std::abs(mean(r.phi_t)) <= 1e-13);
    }
}

TEST_CASE("limit_vector_field: cosine-mode rates for the linear problem") {
    const GridGeom g{16, 1.0};
    Params p = default_params();
    p.tau = 0.0;
    p.beta = monotone_by_name("linear");
    p.pi = perturbation_by_name("zero");
    const Field zero(g, 0.0);
    const InitialData data =
        prepare_initial_data(p, zero, zero, zero, TimeField::zero(), 1.0);

    const double kappa = 1.0 / (1.0 + p.eps); // Yosida slope of the identity
    for (int k : {1, 3, 7}) {
        const double mu = neumann_eigenvalue(g, k);
        const double nu = mu / (1.0 + p.lambda * mu);
        for (double eta : {0.0, 0.5}) {
            p.eta = eta;
            State s;
            s.theta = Field(g, 0.0);
            s.phi = cosine_mode(g, k, 0.8);
            s.w = Field(g, 0.0);
            s.t = 0.0;
            const StateRate r = limit_vector_field(p, data, s);
            const double rate = -nu * (nu + kappa) / (1.0 + eta * nu);
            for (int i = 0; i < g.n_cells; ++i)
                CHECK(r.phi_t[i] ==
                      doctest::Approx(rate * s.phi[i]).epsilon(1e-10).scale(std::abs(rate)));
        }
    }
}

TEST_CASE("limit dynamics: one cosine mode follows its 2x2 (theta, phi) reduction") {
    const GridGeom g{16, 1.0};
    Params p = default_params();
    p.tau = 0.0;
    p.eta = 0.5;
    p.beta = monotone_by_name("linear");
    p.pi = perturbation_by_name("zero");
    const Field zero(g, 0.0);
    const int k = 2;
    const Field phi0 = cosine_mode(g, k, 0.6);
    const InitialData data =
        prepare_initial_data(p, zero, phi0, zero, TimeField::zero(), 0.5);

    const double t_final = 0.5;
    const int n_steps = 2000;
    const Trajectory traj = integrate(p, data, make_initial_state(data),
                                      t_final / n_steps, n_steps, Scheme::rk4);

    // In the cosine basis the linear limit dynamics diagonalize into 2x2
    // (theta, phi) blocks; integrate one block with a fine independent RK4.
    const double mu = neumann_eigenvalue(g, k);
    const double nu = mu / (1.0 + p.lambda * mu);
    const double kappa = 1.0 / (1.0 + p.eps);
    const double s = 1.0 / (1.0 + p.eta * nu);
    const double g_pp = -s * nu * (nu + kappa);
    const double g_pt = s * nu;
    double th = 0.0, ph = 0.6 / (1.0 + p.eps * mu); // mollifier damps the data once
    const int oracle_steps = 200000;
    const double h = t_final / oracle_steps;
    auto f = [&](double th_, double ph_, double& dth, double& dph) {
        dph = g_pp * ph_ + g_pt * th_;
        dth = -dph - nu * th_;
    };
    for (int it = 0; it < oracle_steps; ++it) {
        double k1t, k1p, k2t, k2p, k3t, k3p, k4t, k4p;
        f(th, ph, k1t, k1p);
        f(th + 0.5 * h * k1t, ph + 0.5 * h * k1p, k2t, k2p);
        f(th + 0.5 * h * k2t, ph + 0.5 * h * k2p, k3t, k3p);
        f(th + h * k3t, ph + h * k3p, k4t, k4p);
        th += h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
        ph += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    }

    const Field mode = cosine_mode(g, k);
    const double amp_phi = inner_h(traj.states.back().phi, mode) / inner_h(mode, mode);
    const double amp_theta = inner_h(traj.states.back().theta, mode) / inner_h(mode, mode);
    CHECK(amp_phi == doctest::Approx(ph).epsilon(1e-8));
    CHECK(amp_theta == doctest::Approx(th).epsilon(1e-6).scale(1.0));
}

TEST_CASE("mean of phi is conserved along integrated limit trajectories") {
    const GridGeom g{32, 1.0};
    Params p = default_params();
    p.tau = 0.0;
    const Field theta0 = cosine_mode(g, 1, 0.3, 0.1);
    const Field phi0 = cosine_mode(g, 1, 0.5, 0.3);
    const InitialData data =
        prepare_initial_data(p, theta0, phi0, Field(g, 0.0), TimeField::zero(), 0.2);
    const Trajectory traj = integrate(p, data, make_initial_state(data), 1e-3, 200,
                                      Scheme::picard_midpoint);
    const double m0 = mean(traj.states.front().phi);
    for (const State& s : traj.states)
        CHECK(std::abs(mean(s.phi) - m0) <= 1e-12);
}

TEST_CASE("empirical Lipschitz constant of the field is below the estimate") {
    const GridGeom g{24, 1.0};
    const Params p = default_params();
    const double k_bound = lipschitz_estimate(p);
    std::mt19937 rng(29);
    const InitialData data =
        prepare_initial_data(p, random_field(g, rng), random_field(g, rng),
                             random_field(g, rng), TimeField::zero(), 1.0);

    auto rate_of = [&](const State& s) { return vector_field(p, data, s); };
    for (int trial = 0; trial < 50; ++trial) {
        State s1, s2;
        s1.theta = random_field(g, rng);
        s1.phi = random_field(g, rng);
        s1.w = random_field(g, rng);
        s1.t = 0.0;
        s2.theta = random_field(g, rng);
        s2.phi = random_field(g, rng);
        s2.w = random_field(g, rng);
        s2.t = 0.0;
        const StateRate r1 = rate_of(s1), r2 = rate_of(s2);
        StateRate dr{r1.theta_t, r1.phi_t, r1.w_t};
        dr.theta_t -= r2.theta_t;
        dr.phi_t -= r2.phi_t;
        dr.w_t -= r2.w_t;
        State ds{s1.theta, s1.phi, s1.w, 0.0};
        ds.theta -= s2.theta;
        ds.phi -= s2.phi;
        ds.w -= s2.w;
        CHECK(rate_norm(dr) <= k_bound * state_norm(ds) * (1.0 + 1e-12));
    }
}

// The midpoint mean sequence is geometric, and a geometric sequence satisfies
// the centered-difference form of tau y'' + y' = 0 exactly; only rounding
// (amplified by 1/dt^2) remains.
TEST_CASE("second-equation consistency: tau m(phi_tt) + m(phi_t) at rounding level") {
    const GridGeom g{32, 1.0};
    const Params p = default_params();
    const Field theta0 = cosine_mode(g, 1, 0.3, 0.05);
    const Field phi0 = cosine_mode(g, 1, 0.5, 0.3);
    const Field v0 = cosine_mode(g, 1, 0.3, 0.2);

    auto defect = [&](double dt) {
        const double t_final = 0.2;
        const InitialData data =
            prepare_initial_data(p, theta0, phi0, v0, TimeField::zero(), t_final);
        const int n = static_cast<int>(std::llround(t_final / dt));
        const Trajectory traj = integrate(p, data, make_initial_state(data), dt, n,
                                          Scheme::picard_midpoint);
        double worst = 0.0;
        for (int k = 1; k + 1 < traj.n_samples(); ++k) {
            auto phi_t_mean = [&](int idx) {
                return (mean(traj.states[static_cast<size_t>(idx) + 1].phi) -
                        mean(traj.states[static_cast<size_t>(idx) - 1].phi)) /
                       (2.0 * dt);
            };
            const double m_tt =
                (mean(traj.states[static_cast<size_t>(k) + 1].phi) -
                 2.0 * mean(traj.states[static_cast<size_t>(k)].phi) +
                 mean(traj.states[static_cast<size_t>(k) - 1].phi)) /
                (dt * dt);
            if (k >= 2 && k + 2 < traj.n_samples())
                worst = std::max(worst, std::abs(p.tau * m_tt + phi_t_mean(k)));
        }
        return worst;
    };

    const double d1 = defect(4e-3), d2 = defect(2e-3);
    CHECK(d1 <= 1e-9);
    CHECK(d2 <= 1e-9);
}
