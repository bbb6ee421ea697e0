// scalar_ops.hpp
// Scalar maximal monotone nonlinearity β with primitive β̂, its resolvent
// J_ε = (I + εβ)^{-1}, Yosida approximation β_ε = (I - J_ε)/ε, Moreau-Yosida
// envelope β̂_ε, and the Lipschitz perturbation π.

#pragma once

#include <functional>
#include <string>

#include "pfcs/errors.hpp"

namespace pfcs {

// β monotone continuous with β(0) = 0, β̂ its nonnegative C¹ primitive with
// β̂(0) = 0, plus the growth certificate data: |β(r)|^q <= c_β(1 + β̂(r)).
struct ScalarMonotone {
    std::function<double(double)> eval;      // β
    std::function<double(double)> primitive; // β̂
    double growth_exponent = 2.0;            // q > 1
    double growth_constant = 2.0;            // c_β > 0
    std::string name = "linear";
};

struct LipschitzPerturbation {
    std::function<double(double)> eval; // π
    double lipschitz_constant = 0.0;    // L_π >= 0
    std::string name = "zero";
};

// Registered nonlinearities: "cubic" (r³, q=4/3, c_β=4 — the classical
// double-well choice), "linear" (r, q=2, c_β=2), "quintic" (r⁵, q=6/5, c_β=6).
ScalarMonotone monotone_by_name(const std::string& name);

// Registered perturbations: "negative_identity" (-scale·r, L=scale), "zero".
LipschitzPerturbation perturbation_by_name(const std::string& name, double scale = 1.0);

// The unique s with s + eps·β(s) = r, found by safeguarded Newton with
// bisection fallback on [min(0,r), max(0,r)] (β(0) = 0 and monotonicity
// bracket the root). Residual tolerance atol, at most max_iter iterations;
// throws SolverError on non-convergence.
double resolvent_scalar(const ScalarMonotone& op, double eps, double r,
                        double atol = 1e-12, int max_iter = 100);

// β_ε(r) = (r - J_ε(r))/ε.
double yosida_scalar(const ScalarMonotone& op, double eps, double r);

// β̂_ε(r) = |r - J_ε(r)|²/(2ε) + β̂(J_ε(r)).
double moreau_scalar(const ScalarMonotone& op, double eps, double r);

struct GrowthReport {
    double worst_ratio = 0.0; // max over samples of |β(r)|^q / (c_β(1 + β̂(r)))
    double worst_r = 0.0;
    int n_samples = 0;
    double rtol = 0.0;
    bool pass = false; // worst_ratio <= 1 + rtol
};

GrowthReport growth_certificate(const ScalarMonotone& op, double lo, double hi,
                                int n_samples, double rtol = 1e-9);

} // namespace pfcs
