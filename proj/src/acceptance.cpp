#include "pfcs/acceptance.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "pfcs/asymptotics.hpp"
#include "pfcs/config.hpp"
#include "pfcs/diagnostics.hpp"
#include "pfcs/linalg.hpp"
#include "pfcs/runner.hpp"

namespace pfcs {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

Field random_field(const GridGeom& g, std::mt19937& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Field f(g);
    for (int i = 0; i < g.n_cells; ++i) f[i] = dist(rng);
    return f;
}

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

// The default desk-scale problem: slowest-mode cosine data on Ω = (0, 4)
// with m(φ0) = 0.3, m(v0) = 0.2. The domain length keeps λ·μ_1 and ε·μ_1
// inside the contraction regime over the swept ranges, so the singular-limit
// Cauchy distances decrease from the first halving.
struct DefaultProblem {
    GridGeom geom;
    Field theta0, phi0, v0;
};

DefaultProblem default_problem(int n_cells) {
    DefaultProblem dp;
    dp.geom = GridGeom{n_cells, 4.0};
    dp.theta0 = cosine_mode(dp.geom, 1, 0.3, 0.05);
    dp.phi0 = cosine_mode(dp.geom, 1, 0.5, 0.3);
    dp.v0 = cosine_mode(dp.geom, 1, 0.3, 0.2);
    return dp;
}

bool in_band(double x, double lo, double hi) { return x >= lo && x <= hi; }

// ---------------------------------------------------------------- criteria

CriterionResult c01_scalar_yosida() {
    CriterionResult res{"01_scalar_yosida", false, "", 0.0};
    const ScalarMonotone beta = monotone_by_name("cubic");
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> r_dist(-8.0, 8.0);
    std::uniform_real_distribution<double> e_dist(-3.0, 0.0);

    const double tol = 1e-10;
    int violations = 0;
    double worst = 0.0;
    for (int s = 0; s < 10000; ++s) {
        const double r = r_dist(rng);
        const double eps = std::pow(10.0, e_dist(rng));
        const double env = moreau_scalar(beta, eps, r);
        const double env_exact = beta.primitive(r);
        const double ye = yosida_scalar(beta, eps, r);

        auto check = [&](double excess) {
            if (excess > tol) ++violations;
            worst = std::max(worst, excess);
        };
        check(-env);                             // 0 <= β̂_ε
        check(env - env_exact);                  // β̂_ε <= β̂
        check(std::abs(ye) - std::abs(beta.eval(r))); // |β_ε| <= |β|
        check(std::pow(std::abs(ye), beta.growth_exponent) -
              beta.growth_constant * (1.0 + env)); // growth transfer

        const double r2 = r_dist(rng);
        const double ye2 = yosida_scalar(beta, eps, r2);
        check(std::abs(ye - ye2) - std::abs(r - r2) / eps); // 1/ε-Lipschitz
    }
    res.pass = violations == 0;
    res.detail = "violations=" + std::to_string(violations) + " worst_excess=" + fmt(worst);
    return res;
}

CriterionResult c02_operator_identities() {
    CriterionResult res{"02_operator_identities", false, "", 0.0};
    const GridGeom g{64, 1.0};
    std::mt19937 rng(202);
    const double rtol = 1e-10;
    int violations = 0;
    double worst = 0.0;

    auto check = [&](double excess) {
        if (excess > 0.0) ++violations;
        worst = std::max(worst, excess);
    };

    for (int s = 0; s < 100; ++s) {
        const Field u = random_field(g, rng);
        for (double lam : {1.0, 0.1, 0.01}) {
            const Field j = resolvent_neumann(lam, u);
            const double lhs1 = inner_h(j, j) + 2.0 * lam * grad_norm_sq(j);
            check(lhs1 - inner_h(u, u) * (1.0 + rtol)); // pier7-1
            const Field aj = neg_laplacian(j);
            const double lhs2 = grad_norm_sq(j) + inner_h(j, j) +
                                2.0 * lam * (grad_norm_sq(j) + inner_h(aj, aj));
            const double rhs2 = grad_norm_sq(u) + inner_h(u, u);
            check(lhs2 - rhs2 * (1.0 + rtol)); // sk7-1
        }
        {
            std::uniform_real_distribution<double> ldist(0.01, 0.49);
            const double lam = ldist(rng);
            const Field j = resolvent_neumann(lam, u);
            check(dual_norm(j) - 2.0 * dual_norm(u) * (1.0 + rtol));             // pier7-2 (‖·‖_*)
            check(dual_norm_riesz(j) - 2.0 * dual_norm_riesz(u) * (1.0 + rtol)); // pier7-2 (Riesz)
        }

        Field psi = random_field(g, rng);
        psi.shift(-mean(psi));
        Field zeta = random_field(g, rng);
        zeta.shift(-mean(zeta));

        const double s_lhs = inner_h(psi, inverse_neumann(zeta));
        const double s_rhs = inner_h(zeta, inverse_neumann(psi));
        check(std::abs(s_lhs - s_rhs) - rtol * (1.0 + std::abs(s_lhs) + std::abs(s_rhs))); // simmN

        Field mixed = random_field(g, rng);
        const double m = mean(mixed);
        Field mixed0 = mixed;
        mixed0.shift(-m);
        const double dn = dual_norm(mixed);
        const double alt = inner_h(mixed0, inverse_neumann(mixed0)) + m * m;
        check(std::abs(dn * dn - alt) - rtol * (1.0 + dn * dn)); // danormaVp

        const Field an = neg_laplacian(inverse_neumann(psi));
        Field diff = an;
        diff -= psi;
        check(norm_h(diff) - rtol * norm_h(psi)); // A N ψ = ψ
    }
    res.pass = violations == 0;
    res.detail = "violations=" + std::to_string(violations) + " worst_excess=" + fmt(worst);
    return res;
}

CriterionResult c03_propn_quadrature() {
    CriterionResult res{"03_propn_quadrature", false, "", 0.0};
    const GridGeom g{64, 1.0};
    const double t_final = 1.0;
    const Field mode = cosine_mode(g, 1);

    auto defect = [&](double dt) {
        const int n = static_cast<int>(std::llround(t_final / dt));
        std::vector<double> times(static_cast<size_t>(n) + 1);
        std::vector<double> integrand(static_cast<size_t>(n) + 1);
        for (int k = 0; k <= n; ++k) {
            const double t = t_final * k / n;
            times[static_cast<size_t>(k)] = t;
            Field v = mode;
            v *= std::sin(t);
            Field vt = mode;
            vt *= std::cos(t);
            integrand[static_cast<size_t>(k)] = inner_h(vt, inverse_neumann(v, 1e-6));
        }
        Field v_end = mode;
        v_end *= std::sin(t_final);
        const double dn = dual_norm(v_end);
        return std::abs(trapezoid(times, integrand) - 0.5 * dn * dn);
    };

    const double d1 = defect(1e-2);
    const double d2 = defect(5e-3);
    const double d3 = defect(2.5e-3);
    const double o1 = std::log2(d1 / d2);
    const double o2 = std::log2(d2 / d3);
    res.pass = in_band(o1, 1.7, 2.3) && in_band(o2, 1.7, 2.3);
    res.detail = "defects=[" + fmt(d1) + "," + fmt(d2) + "," + fmt(d3) +
                 "] orders=[" + fmt(o1) + "," + fmt(o2) + "]";
    return res;
}

CriterionResult c04_mean_value_laws() {
    CriterionResult res{"04_mean_value_laws", false, "", 0.0};
    const Params p = default_params(); // tau = 0.5
    const DefaultProblem dp = default_problem(64);
    const double t_final = 1.0;

    std::vector<double> sups;
    double worst_yosida_mean = 0.0;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
        const InitialData data =
            prepare_initial_data(p, dp.theta0, dp.phi0, dp.v0, TimeField::zero(), t_final);
        const int n_steps = static_cast<int>(std::llround(t_final / dt));
        const Trajectory traj = integrate(p, data, make_initial_state(data), dt,
                                          n_steps, Scheme::picard_midpoint);
        const MeanLawReport ml = mean_laws(traj, p, data);
        sups.push_back(std::max(ml.sup_defect_phi, ml.sup_defect_phi_t));
        if (dt == 1e-3) {
            for (const State& s : traj.states)
                worst_yosida_mean = std::max(
                    worst_yosida_mean, std::abs(mean(yosida_neumann(p.lambda, s.w))));
        }
    }
    const double o1 = std::log2(sups[0] / sups[1]);
    const double o2 = std::log2(sups[1] / sups[2]);
    const bool orders_ok = in_band(o1, 1.8, 2.2) && in_band(o2, 1.8, 2.2);
    const bool mean_ok = worst_yosida_mean <= 1e-12;
    res.pass = orders_ok && mean_ok;
    res.detail = "orders=[" + fmt(o1) + "," + fmt(o2) +
                 "] sup|m((-Dn)_l w)|=" + fmt(worst_yosida_mean);
    return res;
}

CriterionResult c05_energy_ledger() {
    CriterionResult res{"05_energy_ledger", false, "", 0.0};
    const Params p = default_params();
    const DefaultProblem dp = default_problem(64);
    const double t_final = 0.5;

    std::vector<double> sups;
    double min_diss = 0.0;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
        const InitialData data =
            prepare_initial_data(p, dp.theta0, dp.phi0, dp.v0, TimeField::zero(), t_final);
        const int n_steps = static_cast<int>(std::llround(t_final / dt));
        const Trajectory traj = integrate(p, data, make_initial_state(data), dt,
                                          n_steps, Scheme::picard_midpoint);
        const EnergyLedger led = energy_ledger(traj, p, data);
        sups.push_back(led.sup_residual);
        min_diss = std::min(min_diss, led.min_dissipation);
    }
    const double o1 = std::log2(sups[0] / sups[1]);
    const double o2 = std::log2(sups[1] / sups[2]);
    const bool orders_ok = in_band(o1, 1.5, 2.5) && in_band(o2, 1.5, 2.5);
    res.pass = orders_ok && min_diss >= -1e-12;
    res.detail = "residuals=[" + fmt(sups[0]) + "," + fmt(sups[1]) + "," + fmt(sups[2]) +
                 "] orders=[" + fmt(o1) + "," + fmt(o2) + "] min_diss=" + fmt(min_diss);
    return res;
}

std::vector<SweepPoint> run_sweep(SweepParam param, const std::vector<double>& values,
                                  int n_cells, double t_final, double dt_target) {
    SweepSpec spec;
    spec.param = param;
    spec.values = values;
    spec.base = default_params();
    spec.norm = TrajNorm::c0_h;

    const DefaultProblem dp = default_problem(n_cells);
    SweepSetup setup;
    setup.geom = dp.geom;
    setup.theta0 = dp.theta0;
    setup.phi0 = dp.phi0;
    setup.v0 = dp.v0;
    setup.forcing = TimeField::zero();
    setup.t_final = t_final;
    setup.dt_target = dt_target;
    setup.scheme = Scheme::picard_midpoint;
    return sweep(spec, setup);
}

bool collect(const std::vector<SweepPoint>& pts, std::vector<Trajectory>& trajs,
             std::vector<double>& values, std::string& err) {
    for (const SweepPoint& pt : pts) {
        if (!pt.ok) {
            err = "point " + fmt(pt.value) + " failed: " + pt.error;
            return false;
        }
        trajs.push_back(pt.traj);
        values.push_back(pt.value);
    }
    return true;
}

CriterionResult c06_lambda_limit() {
    CriterionResult res{"06_lambda_limit", false, "", 0.0};
    const std::vector<double> values{0.5, 0.25, 0.125, 0.0625, 0.03125};
    const auto pts = run_sweep(SweepParam::lambda, values, 64, 0.25, 1e-3);
    std::vector<Trajectory> trajs;
    std::vector<double> vals;
    if (!collect(pts, trajs, vals, res.detail)) return res;
    const ConvergenceReport rep = cauchy_rates(trajs, vals, TrajNorm::c0_h);
    res.pass = rep.monotone_decreasing;
    std::string d = "distances=[";
    for (size_t k = 0; k < rep.distances.size(); ++k)
        d += (k ? "," : "") + fmt(rep.distances[k]);
    res.detail = d + "] monotone=" + (rep.monotone_decreasing ? "yes" : "no");
    return res;
}

CriterionResult c07_eps_limit() {
    CriterionResult res{"07_eps_limit", false, "", 0.0};
    const std::vector<double> values{0.5, 0.25, 0.125, 0.0625, 0.03125};
    const auto pts = run_sweep(SweepParam::eps, values, 64, 0.25, 1e-3);
    std::vector<Trajectory> trajs;
    std::vector<double> vals;
    if (!collect(pts, trajs, vals, res.detail)) return res;
    const ConvergenceReport rep = cauchy_rates(trajs, vals, TrajNorm::c0_h);

    // Uniformity band (Lemma-6.1-style ε-independence, factor-5 policy).
    double worst_band = 1.0;
    {
        std::vector<AprioriMonitor> mons;
        for (size_t k = 0; k < trajs.size(); ++k)
            mons.push_back(apriori_monitor(trajs[k], params_with(default_params(),
                                                                 SweepParam::eps, vals[k])));
        auto band = [&](auto member) {
            double lo = 1e300, hi = 0.0;
            for (const auto& m : mons) {
                const double v = member(m);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi < 1e-10) return 1.0; // identically-zero aggregate
            worst_band = std::max(worst_band, hi / lo);
            return hi / lo;
        };
        band([](const AprioriMonitor& m) { return m.theta_linf_h; });
        band([](const AprioriMonitor& m) { return m.grad_theta_l2; });
        band([](const AprioriMonitor& m) { return m.phi_t_l2h_eta; });
        band([](const AprioriMonitor& m) { return m.phi_t_linf_dual_tau; });
        band([](const AprioriMonitor& m) { return m.phi_t_l2_dual; });
        band([](const AprioriMonitor& m) { return m.grad_phi_linf; });
        band([](const AprioriMonitor& m) { return m.envelope_linf_l1; });
        band([](const AprioriMonitor& m) { return m.mu_l2_dual; });
        band([](const AprioriMonitor& m) { return m.w_linf_v; });
    }

    res.pass = rep.monotone_decreasing && worst_band <= 5.0;
    std::string d = "distances=[";
    for (size_t k = 0; k < rep.distances.size(); ++k)
        d += (k ? "," : "") + fmt(rep.distances[k]);
    res.detail = d + "] monotone=" + (rep.monotone_decreasing ? "yes" : "no") +
                 " worst_band=" + fmt(worst_band);
    return res;
}

CriterionResult c08_eta_limit() {
    CriterionResult res{"08_eta_limit", false, "", 0.0};
    const std::vector<double> values{0.5, 0.25, 0.125, 0.0625, 0.03125};
    const auto pts = run_sweep(SweepParam::eta, values, 64, 0.25, 1e-3);
    std::vector<Trajectory> trajs;
    std::vector<double> vals;
    if (!collect(pts, trajs, vals, res.detail)) return res;
    const ConvergenceReport rep = cauchy_rates(trajs, vals, TrajNorm::c0_h);

    // η^{1/2}‖φ_t‖_{L²H} stays bounded across the sweep.
    double first_entry = 0.0, max_entry = 0.0;
    for (size_t k = 0; k < trajs.size(); ++k) {
        const AprioriMonitor m =
            apriori_monitor(trajs[k], params_with(default_params(), SweepParam::eta, vals[k]));
        if (k == 0) first_entry = m.phi_t_l2h_eta;
        max_entry = std::max(max_entry, m.phi_t_l2h_eta);
    }
    const bool bounded = max_entry <= 5.0 * first_entry + 1e-12;

    res.pass = rep.monotone_decreasing && bounded;
    std::string d = "distances=[";
    for (size_t k = 0; k < rep.distances.size(); ++k)
        d += (k ? "," : "") + fmt(rep.distances[k]);
    res.detail = d + "] monotone=" + (rep.monotone_decreasing ? "yes" : "no") +
                 " eta_entry_max/first=" + fmt(max_entry / std::max(first_entry, 1e-300));
    return res;
}

// Dense affine generator of the τ > 0 linear-toy system and the 2n-dim
// generator of its τ = 0 limit, assembled from first principles (stencil,
// dense inverse), independent of the production operator paths.
struct LinearToyOracle {
    DenseMatrix a_dense, j_dense, y_dense;
    int n;

    explicit LinearToyOracle(const GridGeom& g, double lambda) : n(g.n_cells) {
        const double inv_dx2 = 1.0 / (g.dx() * g.dx());
        a_dense = DenseMatrix(n, n);
        for (int i = 0; i < n; ++i) {
            if (i > 0) {
                a_dense(i, i - 1) -= inv_dx2;
                a_dense(i, i) += inv_dx2;
            }
            if (i + 1 < n) {
                a_dense(i, i + 1) -= inv_dx2;
                a_dense(i, i) += inv_dx2;
            }
        }
        DenseMatrix shifted = a_dense;
        shifted *= lambda;
        shifted += DenseMatrix::identity(n);
        const LuFactors lu = lu_factor(shifted);
        j_dense = DenseMatrix(n, n);
        std::vector<double> e(static_cast<size_t>(n), 0.0);
        for (int c = 0; c < n; ++c) {
            e[static_cast<size_t>(c)] = 1.0;
            const std::vector<double> col = lu_solve(lu, e);
            for (int r = 0; r < n; ++r) j_dense(r, c) = col[static_cast<size_t>(r)];
            e[static_cast<size_t>(c)] = 0.0;
        }
        y_dense = DenseMatrix(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                y_dense(r, c) = ((r == c ? 1.0 : 0.0) - j_dense(r, c)) / lambda;
    }

    // exp(t·[[M, b],[0,0]]) applied to [u0; 1] for the (θ, φ, w) system.
    std::vector<double> evolve_inertial(const Params& p, const InitialData& data,
                                        double t) const {
        const double kappa = 1.0 / (1.0 + p.eps); // β_ε slope for β(r) = r
        const int n3 = 3 * n;
        DenseMatrix m(n3 + 1, n3 + 1);
        std::vector<double> c1(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i)
            c1[static_cast<size_t>(i)] = p.tau * data.v0eps[i] + data.phi0eps[i];

        auto add_block = [&](int br, int bc, const DenseMatrix& blk, double scale) {
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    m(br * n + r, bc * n + c) += scale * blk(r, c);
        };
        const DenseMatrix id = DenseMatrix::identity(n);

        // φ_t = (1/τ)(c1 - φ - Y w)
        add_block(1, 1, id, -1.0 / p.tau);
        add_block(1, 2, y_dense, -1.0 / p.tau);
        // w_t = η φ_t + (Y + κI + π')φ - θ with π = 0
        add_block(2, 1, id, -p.eta / p.tau);
        add_block(2, 2, y_dense, -p.eta / p.tau);
        add_block(2, 1, y_dense, 1.0);
        add_block(2, 1, id, kappa);
        add_block(2, 0, id, -1.0);
        // θ_t = -φ_t - Y θ (f = 0)
        add_block(0, 1, id, 1.0 / p.tau);
        add_block(0, 2, y_dense, 1.0 / p.tau);
        add_block(0, 0, y_dense, -1.0);
        // affine column
        for (int i = 0; i < n; ++i) {
            m(n + i, n3) = c1[static_cast<size_t>(i)] / p.tau;
            m(2 * n + i, n3) = p.eta * c1[static_cast<size_t>(i)] / p.tau;
            m(0 * n + i, n3) = -c1[static_cast<size_t>(i)] / p.tau;
        }

        m *= t;
        const DenseMatrix e = expm(m);
        std::vector<double> u0(static_cast<size_t>(n3) + 1, 0.0);
        for (int i = 0; i < n; ++i) {
            u0[static_cast<size_t>(i)] = data.theta0eps[i];
            u0[static_cast<size_t>(n + i)] = data.phi0eps[i];
            u0[static_cast<size_t>(2 * n + i)] = 0.0;
        }
        u0.back() = 1.0;
        return matvec(e, u0);
    }

    // exp(t·G) u0 for the τ = 0 (θ, φ) system.
    std::vector<double> evolve_limit(const Params& p, const InitialData& data,
                                     double t) const {
        const double kappa = 1.0 / (1.0 + p.eps);
        // S = (I + ηY)^{-1}
        DenseMatrix s_inv = y_dense;
        s_inv *= p.eta;
        s_inv += DenseMatrix::identity(n);
        const LuFactors lu = lu_factor(s_inv);
        DenseMatrix s(n, n);
        std::vector<double> e(static_cast<size_t>(n), 0.0);
        for (int c = 0; c < n; ++c) {
            e[static_cast<size_t>(c)] = 1.0;
            const std::vector<double> col = lu_solve(lu, e);
            for (int r = 0; r < n; ++r) s(r, c) = col[static_cast<size_t>(r)];
            e[static_cast<size_t>(c)] = 0.0;
        }
        const DenseMatrix sy = matmul(s, y_dense);
        DenseMatrix y_plus_kappa = y_dense;
        y_plus_kappa += [&] {
            DenseMatrix k = DenseMatrix::identity(n);
            k *= kappa;
            return k;
        }();
        DenseMatrix g_phi_phi = matmul(sy, y_plus_kappa);
        g_phi_phi *= -1.0;
        const DenseMatrix g_phi_theta = sy;

        DenseMatrix gen(2 * n, 2 * n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                gen(n + r, n + c) = g_phi_phi(r, c);
                gen(n + r, c) = g_phi_theta(r, c);
                gen(r, n + c) = -g_phi_phi(r, c);
                gen(r, c) = -g_phi_theta(r, c) - y_dense(r, c);
            }
        gen *= t;
        const DenseMatrix ex = expm(gen);
        std::vector<double> u0(static_cast<size_t>(2 * n), 0.0);
        for (int i = 0; i < n; ++i) {
            u0[static_cast<size_t>(i)] = data.theta0eps[i];
            u0[static_cast<size_t>(n + i)] = data.phi0eps[i];
        }
        return matvec(ex, u0);
    }
};

CriterionResult c09_tau_limit() {
    CriterionResult res{"09_tau_limit", false, "", 0.0};

    // Part 1: default nonlinear problem, direct errors against the limit run.
    const std::vector<double> values{0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
    const auto pts = run_sweep(SweepParam::tau, values, 64, 0.25, 1e-3);
    std::vector<Trajectory> trajs;
    std::vector<double> vals;
    if (!collect(pts, trajs, vals, res.detail)) return res;

    const Params p0 = params_with(default_params(), SweepParam::tau, 0.0);
    const DefaultProblem dp = default_problem(64);
    const InitialData data0 =
        prepare_initial_data(p0, dp.theta0, dp.phi0, dp.v0, TimeField::zero(), 0.25);
    const double dt0 = guarded_dt(p0, 1e-3, Scheme::picard_midpoint);
    const int n0 = static_cast<int>(std::ceil(0.25 / dt0 - 1e-12));
    const Trajectory limit = integrate(p0, data0, make_initial_state(data0),
                                       0.25 / n0, n0, Scheme::picard_midpoint);

    const ConvergenceReport rep = limit_compare(trajs, vals, limit, TrajNorm::c0_h);
    bool indicator_ok = true;
    for (size_t k = 0; k + 1 < rep.inertia_indicator.size(); ++k)
        if (!(rep.inertia_indicator[k] > rep.inertia_indicator[k + 1])) indicator_ok = false;
    if (!rep.inertia_indicator.empty())
        indicator_ok = indicator_ok && rep.inertia_indicator.back() <=
                                           0.25 * rep.inertia_indicator.front();

    // Part 2: linear toy (β(r) = r, π = 0, θ0 = 0, f = 0, n = 16) against the
    // dense matrix-exponential oracle, both for τ > 0 and for the τ = 0 limit.
    const GridGeom gt{16, 1.0};
    Params toy = default_params();
    toy.tau = 0.25;
    toy.beta = monotone_by_name("linear");
    toy.pi = perturbation_by_name("zero");
    const Field theta0(gt, 0.0, "theta");
    const Field phi0 = cosine_mode(gt, 1, 0.5, 0.3);
    const Field v0 = cosine_mode(gt, 2, 0.3, 0.2);
    const double t_toy = 0.25;
    const InitialData toy_data =
        prepare_initial_data(toy, theta0, phi0, v0, TimeField::zero(), t_toy);
    const LinearToyOracle oracle(gt, toy.lambda);

    double toy_err = 0.0;
    {
        const double dt = 5e-5;
        const int n_steps = static_cast<int>(std::llround(t_toy / dt));
        const Trajectory tr =
            integrate(toy, toy_data, make_initial_state(toy_data), dt, n_steps, Scheme::rk4);
        for (double tq : {0.0625, 0.125, 0.25}) {
            const std::vector<double> ref = oracle.evolve_inertial(toy, toy_data, tq);
            const int k = static_cast<int>(std::llround(tq / dt));
            const State& s = tr.states[static_cast<size_t>(k)];
            for (int i = 0; i < gt.n_cells; ++i) {
                toy_err = std::max(toy_err, std::abs(s.theta[i] - ref[static_cast<size_t>(i)]));
                toy_err = std::max(toy_err,
                                   std::abs(s.phi[i] - ref[static_cast<size_t>(gt.n_cells + i)]));
                toy_err = std::max(
                    toy_err, std::abs(s.w[i] - ref[static_cast<size_t>(2 * gt.n_cells + i)]));
            }
        }
    }
    {
        Params toy0 = toy;
        toy0.tau = 0.0;
        const InitialData d0 =
            prepare_initial_data(toy0, theta0, phi0, v0, TimeField::zero(), t_toy);
        const double dt = 5e-5;
        const int n_steps = static_cast<int>(std::llround(t_toy / dt));
        const Trajectory tr =
            integrate(toy0, d0, make_initial_state(d0), dt, n_steps, Scheme::rk4);
        for (double tq : {0.0625, 0.125, 0.25}) {
            const std::vector<double> ref = oracle.evolve_limit(toy0, d0, tq);
            const int k = static_cast<int>(std::llround(tq / dt));
            const State& s = tr.states[static_cast<size_t>(k)];
            for (int i = 0; i < gt.n_cells; ++i) {
                toy_err = std::max(toy_err, std::abs(s.theta[i] - ref[static_cast<size_t>(i)]));
                toy_err = std::max(toy_err,
                                   std::abs(s.phi[i] - ref[static_cast<size_t>(gt.n_cells + i)]));
            }
        }
    }

    res.pass = rep.monotone_decreasing && indicator_ok && toy_err <= 1e-8;
    std::string d = "errors=[";
    for (size_t k = 0; k < rep.direct_errors.size(); ++k)
        d += (k ? "," : "") + fmt(rep.direct_errors[k]);
    res.detail = d + "] monotone=" + (rep.monotone_decreasing ? "yes" : "no") +
                 " indicator_ok=" + (indicator_ok ? "yes" : "no") +
                 " toy_vs_expm=" + fmt(toy_err);
    return res;
}

CriterionResult c10_weak_residuals() {
    CriterionResult res{"10_weak_residuals", false, "", 0.0};
    const Params p = default_params(); // (lambda, eps) = (0.1, 0.1)
    const DefaultProblem dp = default_problem(64);
    const double t_final = 0.5;

    std::vector<std::array<double, 3>> sups;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
        const InitialData data =
            prepare_initial_data(p, dp.theta0, dp.phi0, dp.v0, TimeField::zero(), t_final);
        const int n_steps = static_cast<int>(std::llround(t_final / dt));
        const Trajectory traj = integrate(p, data, make_initial_state(data), dt,
                                          n_steps, Scheme::picard_midpoint);
        const WeakResiduals wr = weak_residual(traj, p, data);
        sups.push_back({wr.r1_sup_dual, wr.r2_sup_dual, wr.r3_sup_dual});
    }
    bool ok = true;
    std::string orders = "orders=[";
    for (int eq = 0; eq < 3; ++eq) {
        const double o1 = std::log2(sups[0][static_cast<size_t>(eq)] / sups[1][static_cast<size_t>(eq)]);
        const double o2 = std::log2(sups[1][static_cast<size_t>(eq)] / sups[2][static_cast<size_t>(eq)]);
        ok = ok && in_band(o1, 1.5, 2.5) && in_band(o2, 1.5, 2.5);
        orders += (eq ? ";" : "") + fmt(o1) + "," + fmt(o2);
    }
    res.pass = ok;
    res.detail = orders + "]";
    return res;
}

CriterionResult c11_reproducibility() {
    CriterionResult res{"11_reproducibility", false, "", 0.0};
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "pfcs_accept_repro";
    fs::remove_all(base);

    RunConfig cfg;
    cfg.geom = GridGeom{32, 1.0};
    cfg.theta0 = ProfileSpec{"cosine", 0.0, 0.05, 0.3, 2, 0, 0, 0.5, 0.1};
    cfg.phi0 = ProfileSpec{"cosine", 0.0, 0.3, 0.5, 1, 0, 0, 0.5, 0.1};
    cfg.v0 = ProfileSpec{"cosine", 0.0, 0.2, 0.3, 2, 0, 0, 0.5, 0.1};
    cfg.t_final = 0.05;
    cfg.dt = 1e-3;

    const fs::path dir_a = base / "a";
    if (run_command(cfg, dir_a) != 0) {
        res.detail = "first run failed";
        return res;
    }
    const RunConfig cfg2 = load_config_file(dir_a / "manifest.json");
    const fs::path dir_b = base / "b";
    if (run_command(cfg2, dir_b) != 0) {
        res.detail = "manifest re-run failed";
        return res;
    }

    auto slurp = [](const fs::path& f) {
        std::ifstream in(f, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    bool identical = true;
    std::string diff_file;
    for (const char* name : {"manifest.json", "trajectory.csv", "mean_laws.csv",
                             "energy_ledger.csv", "reports.json"}) {
        if (slurp(dir_a / name) != slurp(dir_b / name) || slurp(dir_a / name).empty()) {
            identical = false;
            diff_file = name;
            break;
        }
    }

    // Same exercise through the sweep writer.
    RunConfig scfg = cfg;
    scfg.sweep = SweepConfig{"lambda", {0.5, 0.25}, "c0_h"};
    const fs::path dir_sa = base / "sa";
    const fs::path dir_sb = base / "sb";
    bool sweep_identical = false;
    if (sweep_command(scfg, dir_sa) == 0) {
        const RunConfig scfg2 = load_config_file(dir_sa / "manifest.json");
        if (sweep_command(scfg2, dir_sb) == 0) {
            sweep_identical =
                !slurp(dir_sa / "sweep_report.json").empty() &&
                slurp(dir_sa / "sweep_report.json") == slurp(dir_sb / "sweep_report.json") &&
                slurp(dir_sa / "sweep_distances.csv") == slurp(dir_sb / "sweep_distances.csv") &&
                slurp(dir_sa / "point_00/trajectory.csv") == slurp(dir_sb / "point_00/trajectory.csv");
        }
    }

    fs::remove_all(base);
    res.pass = identical && sweep_identical;
    res.detail = identical ? "run artifacts identical" : "mismatch in " + diff_file;
    res.detail += sweep_identical ? "; sweep artifacts identical" : "; sweep mismatch";
    return res;
}

using CriterionFn = CriterionResult (*)();

const std::vector<std::pair<std::string, CriterionFn>>& registry() {
    static const std::vector<std::pair<std::string, CriterionFn>> reg = {
        {"01_scalar_yosida", c01_scalar_yosida},
        {"02_operator_identities", c02_operator_identities},
        {"03_propn_quadrature", c03_propn_quadrature},
        {"04_mean_value_laws", c04_mean_value_laws},
        {"05_energy_ledger", c05_energy_ledger},
        {"06_lambda_limit", c06_lambda_limit},
        {"07_eps_limit", c07_eps_limit},
        {"08_eta_limit", c08_eta_limit},
        {"09_tau_limit", c09_tau_limit},
        {"10_weak_residuals", c10_weak_residuals},
        {"11_reproducibility", c11_reproducibility},
    };
    return reg;
}

} // namespace

const std::vector<std::string>& acceptance_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [name, fn] : registry()) n.push_back(name);
        return n;
    }();
    return names;
}

std::vector<CriterionResult> run_acceptance(const std::string& filter) {
    std::vector<CriterionResult> results;
    for (const auto& [name, fn] : registry()) {
        if (!filter.empty() && name.find(filter) == std::string::npos) continue;
        const auto start = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r.name = name;
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        results.push_back(std::move(r));
    }
    return results;
}

void print_results(const std::vector<CriterionResult>& results, std::ostream& os) {
    for (const CriterionResult& r : results) {
        char line[512];
        std::snprintf(line, sizeof line, "%s  %-24s %s  (%.2fs)\n",
                      r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str(),
                      r.seconds);
        os << line;
    }
}

} // namespace pfcs
