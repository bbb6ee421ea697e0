#include "pfcs/scalar_ops.hpp"

#include <algorithm>
#include <cmath>

namespace pfcs {

ScalarMonotone monotone_by_name(const std::string& name) {
    if (name == "cubic") {
        return {[](double r) { return r * r * r; },
                [](double r) { return 0.25 * r * r * r * r; },
                4.0 / 3.0, 4.0, "cubic"};
    }
    if (name == "linear") {
        return {[](double r) { return r; },
                [](double r) { return 0.5 * r * r; },
                2.0, 2.0, "linear"};
    }
    if (name == "quintic") {
        return {[](double r) { return std::pow(r, 5); },
                [](double r) { return std::pow(r, 6) / 6.0; },
                6.0 / 5.0, 6.0, "quintic"};
    }
    throw ConfigError("unknown nonlinearity '" + name + "'", "params.beta.name");
}

LipschitzPerturbation perturbation_by_name(const std::string& name, double scale) {
    if (name == "negative_identity") {
        return {[scale](double r) { return -scale * r; }, std::abs(scale), "negative_identity"};
    }
    if (name == "zero") {
        return {[](double) { return 0.0; }, 0.0, "zero"};
    }
    throw ConfigError("unknown perturbation '" + name + "'", "params.pi.name");
}

double resolvent_scalar(const ScalarMonotone& op, double eps, double r,
                        double atol, int max_iter) {
    if (!(eps > 0.0)) throw UsageError("resolvent_scalar: eps must be > 0");

    auto g = [&](double s) { return s + eps * op.eval(s) - r; };

    double lo = std::min(0.0, r);
    double hi = std::max(0.0, r);
    double s = 0.5 * (lo + hi);
    double gs = g(s);

    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(gs) <= atol) return s;
        if (gs > 0.0) hi = s; else lo = s;

        // Newton with a finite-difference slope, clipped back to bisection
        // whenever the step leaves the bracket.
        const double h = 1e-7 * std::max(1.0, std::abs(s));
        const double slope = 1.0 + eps * (op.eval(s + h) - op.eval(s - h)) / (2.0 * h);
        double next = (slope > 0.0) ? s - gs / slope : s;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        s = next;
        gs = g(s);
    }
    if (std::abs(gs) <= atol) return s;
    throw SolverError("resolvent_scalar: no convergence after " +
                          std::to_string(max_iter) + " iterations",
                      std::abs(gs), max_iter);
}

double yosida_scalar(const ScalarMonotone& op, double eps, double r) {
    return (r - resolvent_scalar(op, eps, r)) / eps;
}

double moreau_scalar(const ScalarMonotone& op, double eps, double r) {
    const double j = resolvent_scalar(op, eps, r);
    const double d = r - j;
    return d * d / (2.0 * eps) + op.primitive(j);
}

GrowthReport growth_certificate(const ScalarMonotone& op, double lo, double hi,
                                int n_samples, double rtol) {
    if (n_samples < 2) throw UsageError("growth_certificate: need n_samples >= 2");
    GrowthReport rep;
    rep.n_samples = n_samples;
    rep.rtol = rtol;
    for (int i = 0; i < n_samples; ++i) {
        const double r = lo + (hi - lo) * i / (n_samples - 1);
        const double num = std::pow(std::abs(op.eval(r)), op.growth_exponent);
        const double den = op.growth_constant * (1.0 + op.primitive(r));
        const double ratio = num / den;
        if (ratio > rep.worst_ratio) {
            rep.worst_ratio = ratio;
            rep.worst_r = r;
        }
    }
    rep.pass = rep.worst_ratio <= 1.0 + rtol;
    return rep;
}

} // namespace pfcs
