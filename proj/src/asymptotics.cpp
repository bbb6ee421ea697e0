#include "pfcs/asymptotics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "pfcs/diagnostics.hpp"

namespace pfcs {

SweepParam sweep_param_by_name(const std::string& name) {
    if (name == "lambda") return SweepParam::lambda;
    if (name == "eps") return SweepParam::eps;
    if (name == "eta") return SweepParam::eta;
    if (name == "tau") return SweepParam::tau;
    throw ConfigError("unknown sweep parameter '" + name + "'", "sweep.param");
}

std::string sweep_param_name(SweepParam p) {
    switch (p) {
        case SweepParam::lambda: return "lambda";
        case SweepParam::eps: return "eps";
        case SweepParam::eta: return "eta";
        case SweepParam::tau: return "tau";
    }
    return "?";
}

TrajNorm traj_norm_by_name(const std::string& name) {
    if (name == "c0_h") return TrajNorm::c0_h;
    if (name == "l2_dual") return TrajNorm::l2_dual;
    if (name == "linf_dual") return TrajNorm::linf_dual;
    throw ConfigError("unknown trajectory norm '" + name + "'", "sweep.norm");
}

std::string traj_norm_name(TrajNorm n) {
    switch (n) {
        case TrajNorm::c0_h: return "c0_h";
        case TrajNorm::l2_dual: return "l2_dual";
        case TrajNorm::linf_dual: return "linf_dual";
    }
    return "?";
}

void SweepSpec::validate() const {
    if (values.empty()) throw UsageError("SweepSpec: no values");
    for (size_t k = 0; k < values.size(); ++k) {
        const bool last_tau_zero =
            param == SweepParam::tau && k + 1 == values.size() && values[k] == 0.0;
        if (!(values[k] > 0.0) && !last_tau_zero)
            throw UsageError("SweepSpec: values must be > 0 (tau may end at 0)");
        if (k > 0 && !(values[k] < values[k - 1]))
            throw UsageError("SweepSpec: values must be strictly decreasing");
    }
}

Params params_with(const Params& base, SweepParam which, double value) {
    Params p = base;
    switch (which) {
        case SweepParam::lambda: p.lambda = value; break;
        case SweepParam::eps: p.eps = value; break;
        case SweepParam::eta: p.eta = value; break;
        case SweepParam::tau: p.tau = value; break;
    }
    return p;
}

std::vector<SweepPoint> sweep(const SweepSpec& spec, const SweepSetup& setup) {
    spec.validate();
    setup.geom.validate();
    const size_t n_points = spec.values.size();
    std::vector<SweepPoint> points(n_points);

    auto run_point = [&](size_t idx) {
        SweepPoint& pt = points[idx];
        pt.value = spec.values[idx];
        try {
            const Params p = params_with(spec.base, spec.param, pt.value);
            p.validate();
            const double dt_guarded = guarded_dt(p, setup.dt_target, setup.scheme);
            const double raw_steps = std::ceil(setup.t_final / dt_guarded - 1e-12);
            if (raw_steps > 2e7)
                throw UsageError("stability guard demands more than 2e7 steps");
            const int n_steps = std::max(1, static_cast<int>(raw_steps));
            const double dt = setup.t_final / n_steps;
            const InitialData data =
                prepare_initial_data(p, setup.theta0, setup.phi0, setup.v0,
                                     setup.forcing, setup.t_final, n_steps + 1);
            pt.dt_used = dt;
            pt.traj = integrate(p, data, make_initial_state(data), dt, n_steps, setup.scheme);
            pt.ok = true;
        } catch (const std::exception& e) {
            pt.ok = false;
            pt.error = e.what();
        }
    };

    unsigned workers = setup.workers > 0 ? static_cast<unsigned>(setup.workers)
                                         : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n_points)));

    if (workers <= 1) {
        for (size_t i = 0; i < n_points; ++i) run_point(i);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const size_t i = next.fetch_add(1);
                    if (i >= n_points) return;
                    run_point(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    return points;
}

Field interp_phi(const Trajectory& traj, double t) {
    const auto& ts = traj.times;
    if (t <= ts.front()) return traj.states.front().phi;
    if (t >= ts.back()) return traj.states.back().phi;
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const size_t k = static_cast<size_t>(it - ts.begin()) - 1;
    const double w = (t - ts[k]) / (ts[k + 1] - ts[k]);
    Field out = traj.states[k].phi;
    out *= (1.0 - w);
    out.add_scaled(traj.states[k + 1].phi, w);
    return out;
}

double traj_distance(const Trajectory& a, const Trajectory& b, TrajNorm norm) {
    if (a.n_samples() < 2 || b.n_samples() < 2)
        throw UsageError("traj_distance: need at least 2 samples");
    if (std::abs(a.t_final() - b.t_final()) > 1e-9 * std::max(1.0, a.t_final()))
        throw UsageError("traj_distance: mismatched time horizons");

    // Coarsest common grid: the sample times of the shorter trajectory.
    const Trajectory& coarse = a.n_samples() <= b.n_samples() ? a : b;
    double sup = 0.0;
    std::vector<double> sq(coarse.times.size(), 0.0);
    for (size_t k = 0; k < coarse.times.size(); ++k) {
        const double t = coarse.times[k];
        Field d = interp_phi(a, t);
        d -= interp_phi(b, t);
        double v = 0.0;
        switch (norm) {
            case TrajNorm::c0_h: v = norm_h(d); break;
            case TrajNorm::l2_dual:
            case TrajNorm::linf_dual: v = dual_norm(d); break;
        }
        sup = std::max(sup, v);
        sq[k] = v * v;
    }
    if (norm == TrajNorm::l2_dual) return std::sqrt(trapezoid(coarse.times, sq));
    return sup;
}

namespace {

// sup_t ‖φ_t‖_* with φ_t reconstructed by centered differences.
double sup_dual_phi_t(const Trajectory& traj) {
    const int n = traj.n_samples();
    double sup = 0.0;
    for (int k = 0; k < n; ++k) {
        const int a = k > 0 ? k - 1 : 0;
        const int b = k + 1 < n ? k + 1 : n - 1;
        if (a == b) continue;
        Field d = traj.states[static_cast<size_t>(b)].phi;
        d -= traj.states[static_cast<size_t>(a)].phi;
        d *= 1.0 / (traj.times[static_cast<size_t>(b)] - traj.times[static_cast<size_t>(a)]);
        sup = std::max(sup, dual_norm(d));
    }
    return sup;
}

} // namespace

ConvergenceReport cauchy_rates(const std::vector<Trajectory>& trajs,
                               const std::vector<double>& values, TrajNorm norm) {
    if (trajs.size() != values.size())
        throw UsageError("cauchy_rates: values/trajectories size mismatch");
    ConvergenceReport rep;
    rep.norm = norm;
    rep.values = values;
    if (trajs.size() < 2) {
        rep.monotone_decreasing = true; // single point is trivially Cauchy
        return rep;
    }
    for (size_t k = 0; k + 1 < trajs.size(); ++k)
        rep.distances.push_back(traj_distance(trajs[k], trajs[k + 1], norm));
    for (size_t k = 0; k + 1 < rep.distances.size(); ++k) {
        const double dk = rep.distances[k];
        const double dk1 = rep.distances[k + 1];
        rep.observed_orders.push_back(dk1 > 0.0 ? std::log2(dk / dk1) : 0.0);
    }
    rep.monotone_decreasing = true;
    for (size_t k = 0; k + 1 < rep.distances.size(); ++k)
        if (!(rep.distances[k] > rep.distances[k + 1])) rep.monotone_decreasing = false;
    return rep;
}

ConvergenceReport limit_compare(const std::vector<Trajectory>& tau_trajs,
                                const std::vector<double>& taus,
                                const Trajectory& limit_traj, TrajNorm norm) {
    if (tau_trajs.size() != taus.size())
        throw UsageError("limit_compare: taus/trajectories size mismatch");
    for (const Trajectory& tr : tau_trajs) {
        const Params& a = tr.params;
        const Params& b = limit_traj.params;
        if (a.lambda != b.lambda || a.eps != b.eps || a.eta != b.eta)
            throw UsageError("limit_compare: frozen (lambda, eps, eta) mismatch");
    }
    ConvergenceReport rep;
    rep.norm = norm;
    rep.values = taus;
    for (size_t k = 0; k < tau_trajs.size(); ++k) {
        rep.direct_errors.push_back(traj_distance(tau_trajs[k], limit_traj, norm));
        rep.inertia_indicator.push_back(taus[k] * sup_dual_phi_t(tau_trajs[k]));
    }
    for (size_t k = 0; k + 1 < rep.direct_errors.size(); ++k) {
        const double e = rep.direct_errors[k];
        const double e1 = rep.direct_errors[k + 1];
        rep.observed_orders.push_back(e1 > 0.0 ? std::log2(e / e1) : 0.0);
    }
    rep.monotone_decreasing = true;
    for (size_t k = 0; k + 1 < rep.direct_errors.size(); ++k)
        if (!(rep.direct_errors[k] > rep.direct_errors[k + 1]))
            rep.monotone_decreasing = false;
    return rep;
}

} // namespace pfcs
