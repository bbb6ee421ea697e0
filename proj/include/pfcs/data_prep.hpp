// data_prep.hpp
// Construction of the approximating data f_ε, θ_{0ε}, φ_{0ε}, v_{0ε}:
// elliptic mollification (I + εA)^{-1} for the initial fields, an implicit-
// Euler parabolic regularization for the forcing, and the certificate that
// the mollified data keep their means and a bounded envelope energy.

#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "pfcs/grid.hpp"
#include "pfcs/scalar_ops.hpp"

namespace pfcs {

// Time-dependent field: identically zero, analytic in (x, t), or sampled on
// a uniform time grid with linear interpolation between samples.
class TimeField {
public:
    TimeField() : impl_(Zero{}) {}

    static TimeField zero() { return TimeField(); }
    static TimeField analytic(std::function<double(double, double)> f); // f(x, t)
    static TimeField sampled(std::vector<double> times, std::vector<Field> values);

    Field at(double t, const GridGeom& g) const;
    bool is_zero() const { return std::holds_alternative<Zero>(impl_); }
    bool is_sampled() const { return std::holds_alternative<Sampled>(impl_); }
    const std::vector<double>& sample_times() const;
    const std::vector<Field>& sample_values() const;

private:
    struct Zero {};
    struct Analytic { std::function<double(double, double)> f; };
    struct Sampled { std::vector<double> times; std::vector<Field> values; };
    std::variant<Zero, Analytic, Sampled> impl_;
};

// (I + εA)^{-1} u0; mean preserved exactly.
Field mollify_elliptic(double eps, const Field& u0);

// Dual mollification (v_{0ε}, v)_H + ε(∇v_{0ε}, ∇v) = ⟨v0, v⟩: with duals
// represented in H this is the same elliptic solve.
Field mollify_dual(double eps, const Field& v0);

// Implicit-Euler discretization of ε(f_ε)_t + εA f_ε + f_ε = f on the given
// time grid, started from f_ε(0) = (I + εA)^{-1} f(0).
TimeField mollify_forcing(double eps, const std::vector<double>& times,
                          const std::vector<Field>& f_samples);
TimeField mollify_forcing(double eps, const TimeField& f, const GridGeom& g,
                          double t_final, int n_samples);

struct DataCertificate {
    double envelope_energy = 0.0;   // ∫ β̂_ε(φ_{0ε})
    double envelope_bound = 0.0;    // ∫ β̂(φ_0)
    double mean_residual_phi = 0.0; // |m(φ_{0ε}) - m(φ_0)|
    double mean_residual_v = 0.0;   // |m(v_{0ε}) - m(v_0)|
    bool envelope_ok = false;       // envelope_energy <= envelope_bound + tol
    bool means_ok = false;          // both residuals <= 1e-12
};

DataCertificate certify_data(double eps, const ScalarMonotone& beta,
                             const Field& phi0eps, const Field& phi0,
                             const Field& v0eps, const Field& v0);

} // namespace pfcs
