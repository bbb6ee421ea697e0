#include "pfcs/data_prep.hpp"

#include <algorithm>
#include <cmath>

namespace pfcs {

TimeField TimeField::analytic(std::function<double(double, double)> f) {
    TimeField tf;
    tf.impl_ = Analytic{std::move(f)};
    return tf;
}

TimeField TimeField::sampled(std::vector<double> times, std::vector<Field> values) {
    if (times.size() != values.size() || times.size() < 2)
        throw UsageError("TimeField::sampled: need matching times/values, size >= 2");
    for (size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1]))
            throw UsageError("TimeField::sampled: times must be strictly increasing");
    TimeField tf;
    tf.impl_ = Sampled{std::move(times), std::move(values)};
    return tf;
}

Field TimeField::at(double t, const GridGeom& g) const {
    if (const auto* z = std::get_if<Zero>(&impl_)) {
        (void)z;
        return Field(g);
    }
    if (const auto* a = std::get_if<Analytic>(&impl_)) {
        return Field::sampled(g, [&](double x) { return a->f(x, t); });
    }
    const auto& s = std::get<Sampled>(impl_);
    const auto& ts = s.times;
    if (t <= ts.front()) return s.values.front();
    if (t >= ts.back()) return s.values.back();
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const size_t k = static_cast<size_t>(it - ts.begin()) - 1;
    const double w = (t - ts[k]) / (ts[k + 1] - ts[k]);
    Field out = s.values[k];
    out *= (1.0 - w);
    out.add_scaled(s.values[k + 1], w);
    return out;
}

const std::vector<double>& TimeField::sample_times() const {
    return std::get<Sampled>(impl_).times;
}

const std::vector<Field>& TimeField::sample_values() const {
    return std::get<Sampled>(impl_).values;
}

Field mollify_elliptic(double eps, const Field& u0) {
    if (!(eps > 0.0)) throw UsageError("mollify_elliptic: eps must be > 0");
    return solve_shifted_neumann(eps, u0);
}

Field mollify_dual(double eps, const Field& v0) {
    if (!(eps > 0.0)) throw UsageError("mollify_dual: eps must be > 0");
    return solve_shifted_neumann(eps, v0);
}

TimeField mollify_forcing(double eps, const std::vector<double>& times,
                          const std::vector<Field>& f_samples) {
    if (!(eps > 0.0)) throw UsageError("mollify_forcing: eps must be > 0");
    if (times.size() != f_samples.size() || times.size() < 2)
        throw UsageError("mollify_forcing: need matching times/samples, size >= 2");

    std::vector<Field> out;
    out.reserve(times.size());
    out.push_back(mollify_elliptic(eps, f_samples.front()));
    for (size_t k = 1; k < times.size(); ++k) {
        const double dt = times[k] - times[k - 1];
        if (!(dt > 0.0)) throw UsageError("mollify_forcing: times must increase");
        // ε(f^{k+1}-f^k)/dt + εA f^{k+1} + f^{k+1} = f(t_{k+1})
        const double a = 1.0 + eps / dt;
        Field rhs = f_samples[k];
        rhs.add_scaled(out.back(), eps / dt);
        rhs *= 1.0 / a;
        out.push_back(solve_shifted_neumann(eps / a, rhs));
    }
    return TimeField::sampled(times, std::move(out));
}

TimeField mollify_forcing(double eps, const TimeField& f, const GridGeom& g,
                          double t_final, int n_samples) {
    if (f.is_zero()) return TimeField::zero();
    if (n_samples < 2) throw UsageError("mollify_forcing: need n_samples >= 2");
    std::vector<double> times(static_cast<size_t>(n_samples));
    std::vector<Field> samples;
    samples.reserve(times.size());
    for (int k = 0; k < n_samples; ++k) {
        times[static_cast<size_t>(k)] = t_final * k / (n_samples - 1);
        samples.push_back(f.at(times[static_cast<size_t>(k)], g));
    }
    return mollify_forcing(eps, times, samples);
}

DataCertificate certify_data(double eps, const ScalarMonotone& beta,
                             const Field& phi0eps, const Field& phi0,
                             const Field& v0eps, const Field& v0) {
    require_same_geom(phi0eps, phi0);
    require_same_geom(v0eps, v0);

    DataCertificate cert;
    const double dx = phi0.geom().dx();
    for (int i = 0; i < phi0.size(); ++i) {
        cert.envelope_energy += moreau_scalar(beta, eps, phi0eps[i]) * dx;
        cert.envelope_bound += beta.primitive(phi0[i]) * dx;
    }
    cert.mean_residual_phi = std::abs(mean(phi0eps) - mean(phi0));
    cert.mean_residual_v = std::abs(mean(v0eps) - mean(v0));
    cert.envelope_ok = cert.envelope_energy <= cert.envelope_bound + 1e-12;
    cert.means_ok = cert.mean_residual_phi <= 1e-12 && cert.mean_residual_v <= 1e-12;
    return cert;
}

} // namespace pfcs
