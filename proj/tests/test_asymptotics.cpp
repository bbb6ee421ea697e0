#include <doctest.h>

#include <cmath>

#include "pfcs/asymptotics.hpp"
#include "pfcs/diagnostics.hpp"

using namespace pfcs;

namespace {

Params base_params() {
    Params p;
    p.tau = 0.5;
    p.eta = 0.5;
    p.eps = 0.1;
    p.lambda = 0.1;
    p.beta = monotone_by_name("cubic");
    p.pi = perturbation_by_name("negative_identity");
    return p;
}

SweepSetup small_setup(int n_cells = 32, double t_final = 0.1) {
    const GridGeom g{n_cells, 4.0};
    SweepSetup s;
    s.geom = g;
    s.theta0 = cosine_mode(g, 1, 0.3, 0.05);
    s.phi0 = cosine_mode(g, 1, 0.5, 0.3);
    s.v0 = cosine_mode(g, 1, 0.3, 0.2);
    s.forcing = TimeField::zero();
    s.t_final = t_final;
    s.dt_target = 1e-3;
    s.scheme = Scheme::picard_midpoint;
    s.workers = 2;
    return s;
}

} // namespace

TEST_CASE("SweepSpec validation") {
    SweepSpec spec;
    spec.base = base_params();
    spec.param = SweepParam::lambda;
    spec.values = {0.5, 0.25};
    CHECK_NOTHROW(spec.validate());
    spec.values = {0.25, 0.5};
    CHECK_THROWS_AS(spec.validate(), UsageError);
    spec.values = {0.5, 0.0};
    CHECK_THROWS_AS(spec.validate(), UsageError);
    spec.param = SweepParam::tau;
    CHECK_NOTHROW(spec.validate()); // tau may end at 0
    spec.values = {};
    CHECK_THROWS_AS(spec.validate(), UsageError);
}

TEST_CASE("identical trajectories have zero Cauchy distance") {
    SweepSpec spec;
    spec.base = base_params();
    spec.param = SweepParam::lambda;
    spec.values = {0.1};
    const auto pts = sweep(spec, small_setup());
    REQUIRE(pts.size() == 1);
    REQUIRE(pts[0].ok);
    const std::vector<Trajectory> same{pts[0].traj, pts[0].traj, pts[0].traj};
    const ConvergenceReport rep = cauchy_rates(same, {3.0, 2.0, 1.0}, TrajNorm::c0_h);
    CHECK(rep.distances.size() == 2);
    CHECK(rep.distances[0] == 0.0);
    CHECK(rep.distances[1] == 0.0);
}

TEST_CASE("single-value sweep is trivially Cauchy") {
    SweepSpec spec;
    spec.base = base_params();
    spec.param = SweepParam::eps;
    spec.values = {0.25};
    const auto pts = sweep(spec, small_setup());
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].ok);
    const ConvergenceReport rep = cauchy_rates({pts[0].traj}, {0.25}, TrajNorm::c0_h);
    CHECK(rep.distances.empty());
    CHECK(rep.monotone_decreasing);
}

TEST_CASE("lambda sweep produces decreasing distances in every selectable norm") {
    SweepSpec spec;
    spec.base = base_params();
    spec.param = SweepParam::lambda;
    spec.values = {0.5, 0.25, 0.125, 0.0625};
    const auto pts = sweep(spec, small_setup());
    std::vector<Trajectory> trajs;
    std::vector<double> vals;
    for (const auto& pt : pts) {
        REQUIRE(pt.ok);
        trajs.push_back(pt.traj);
        vals.push_back(pt.value);
    }
    for (TrajNorm nrm : {TrajNorm::c0_h, TrajNorm::l2_dual, TrajNorm::linf_dual}) {
        const ConvergenceReport rep = cauchy_rates(trajs, vals, nrm);
        CHECK(rep.monotone_decreasing);
        CHECK(rep.observed_orders.size() == 2);
    }
}

TEST_CASE("eps sweep: envelope entries respect the scalar sandwich") {
    SweepSpec spec;
    spec.base = base_params();
    spec.param = SweepParam::eps;
    spec.values = {0.5, 0.25, 0.125};
    const SweepSetup setup = small_setup();
    const auto pts = sweep(spec, setup);
    for (const auto& pt : pts) {
        REQUIRE(pt.ok);
        const Field& phi_end = pt.traj.states.back().phi;
        const double env = envelope_integral(spec.base.beta, pt.value, phi_end);
        double raw = 0.0;
        for (int i = 0; i < phi_end.size(); ++i)
            raw += spec.base.beta.primitive(phi_end[i]) * phi_end.geom().dx();
        CHECK(env <= raw + 1e-12);
    }
    // envelope evaluated on one fixed field is nondecreasing as eps decreases
    const Field probe = pts[0].traj.states.back().phi;
    double prev = 0.0;
    for (double eps : {0.5, 0.25, 0.125, 0.0625}) {
        const double env = envelope_integral(spec.base.beta, eps, probe);
        CHECK(env >= prev - 1e-12);
        prev = env;
    }
}

TEST_CASE("distance computation rejects mismatched horizons; limit_compare rejects mismatched params") {
    SweepSpec spec;
    spec.base = base_params();
    spec.param = SweepParam::lambda;
    spec.values = {0.5};
    const auto a = sweep(spec, small_setup(32, 0.1));
    const auto b = sweep(spec, small_setup(32, 0.2));
    REQUIRE(a[0].ok);
    REQUIRE(b[0].ok);
    CHECK_THROWS_AS(traj_distance(a[0].traj, b[0].traj, TrajNorm::c0_h), UsageError);

    Trajectory wrong = a[0].traj;
    wrong.params.eps = 0.05;
    CHECK_THROWS_AS(limit_compare({a[0].traj}, {0.5}, wrong, TrajNorm::c0_h), UsageError);
}

TEST_CASE("tau sweep on the linear toy converges to the limit trajectory") {
    const GridGeom g{16, 1.0};
    SweepSpec spec;
    spec.base = base_params();
    spec.base.beta = monotone_by_name("linear");
    spec.base.pi = perturbation_by_name("zero");
    spec.param = SweepParam::tau;
    spec.values = {0.5, 0.25, 0.125, 0.0625};

    SweepSetup setup;
    setup.geom = g;
    setup.theta0 = Field(g, 0.0);
    setup.phi0 = cosine_mode(g, 1, 0.5, 0.3);
    setup.v0 = cosine_mode(g, 2, 0.3, 0.2);
    setup.forcing = TimeField::zero();
    setup.t_final = 0.25;
    setup.dt_target = 5e-4;
    setup.scheme = Scheme::picard_midpoint;

    const auto pts = sweep(spec, setup);
    std::vector<Trajectory> trajs;
    std::vector<double> taus;
    for (const auto& pt : pts) {
        REQUIRE(pt.ok);
        trajs.push_back(pt.traj);
        taus.push_back(pt.value);
    }

    Params p0 = spec.base;
    p0.tau = 0.0;
    const InitialData d0 = prepare_initial_data(p0, setup.theta0, setup.phi0, setup.v0,
                                                TimeField::zero(), setup.t_final);
    const Trajectory limit = integrate(p0, d0, make_initial_state(d0), 5e-4, 500,
                                       Scheme::picard_midpoint);

    const ConvergenceReport rep = limit_compare(trajs, taus, limit, TrajNorm::c0_h);
    CHECK(rep.monotone_decreasing);
    REQUIRE(rep.direct_errors.size() == 4);
    CHECK(rep.direct_errors.back() < rep.direct_errors.front());
    REQUIRE(rep.inertia_indicator.size() == 4);
    for (size_t k = 0; k + 1 < rep.inertia_indicator.size(); ++k)
        CHECK(rep.inertia_indicator[k] > rep.inertia_indicator[k + 1]);
}

TEST_CASE("per-point failures are recorded and the sweep continues") {
    SweepSpec spec;
    spec.base = base_params();
    spec.param = SweepParam::lambda;
    spec.values = {0.5, 1e-30}; // guard demands an absurd step count
    const auto pts = sweep(spec, small_setup(16, 0.05));
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].ok);
    CHECK_FALSE(pts[1].ok);
    CHECK_FALSE(pts[1].error.empty());
}

TEST_CASE("interp_phi is exact on linearly evolving synthetic trajectories") {
    const GridGeom g{8, 1.0};
    Trajectory traj;
    traj.params = base_params();
    for (int k = 0; k <= 4; ++k) {
        State s;
        s.theta = Field(g, 0.0);
        s.phi = Field(g, static_cast<double>(k));
        s.w = Field(g, 0.0);
        s.t = 0.5 * k;
        traj.times.push_back(s.t);
        traj.states.push_back(s);
        traj.mu.push_back(Field(g, 0.0));
    }
    CHECK(interp_phi(traj, 0.75)[0] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(interp_phi(traj, 2.0)[3] == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(interp_phi(traj, -1.0)[0] == 0.0);
}

TEST_CASE("sweeps and reports are reproducible") {
    SweepSpec spec;
    spec.base = base_params();
    spec.param = SweepParam::eta;
    spec.values = {0.5, 0.25, 0.125};
    const SweepSetup setup = small_setup(16, 0.05);
    const auto a = sweep(spec, setup);
    const auto b = sweep(spec, setup);
    std::vector<Trajectory> ta, tb;
    std::vector<double> va, vb;
    for (const auto& pt : a) { ta.push_back(pt.traj); va.push_back(pt.value); }
    for (const auto& pt : b) { tb.push_back(pt.traj); vb.push_back(pt.value); }
    const ConvergenceReport ra = cauchy_rates(ta, va, TrajNorm::l2_dual);
    const ConvergenceReport rb = cauchy_rates(tb, vb, TrajNorm::l2_dual);
    REQUIRE(ra.distances.size() == rb.distances.size());
    for (size_t k = 0; k < ra.distances.size(); ++k)
        CHECK(ra.distances[k] == rb.distances[k]);
}

TEST_CASE("norm selector sanity: L2-dual distance is controlled by the C0-H distance") {
    SweepSpec spec;
    spec.base = base_params();
    spec.param = SweepParam::lambda;
    spec.values = {0.5, 0.25};
    const SweepSetup setup = small_setup();
    const auto pts = sweep(spec, setup);
    REQUIRE(pts[0].ok);
    REQUIRE(pts[1].ok);
    const double d_c0h = traj_distance(pts[0].traj, pts[1].traj, TrajNorm::c0_h);
    const double d_l2 = traj_distance(pts[0].traj, pts[1].traj, TrajNorm::l2_dual);
    // ‖ψ‖_* <= max(L^{-1/2}, μ1^{-1/2})‖ψ‖_H per geometry, so
    // d_{L²V*} <= sqrt(T)·C·d_{C⁰H}.
    const double c_geom = std::max(1.0 / std::sqrt(setup.geom.length),
                                   1.0 / std::sqrt(neumann_eigenvalue(setup.geom, 1)));
    CHECK(d_l2 <= std::sqrt(setup.t_final) * c_geom * d_c0h * (1.0 + 1e-10));
}

TEST_CASE("name round-trips for sweep parameters and norms") {
    for (const char* n : {"lambda", "eps", "eta", "tau"})
        CHECK(sweep_param_name(sweep_param_by_name(n)) == n);
    for (const char* n : {"c0_h", "l2_dual", "linf_dual"})
        CHECK(traj_norm_name(traj_norm_by_name(n)) == n);
    CHECK_THROWS_AS(sweep_param_by_name("mu"), ConfigError);
    CHECK_THROWS_AS(traj_norm_by_name("h1"), ConfigError);
}
