#include "pfcs/grid.hpp"

#include <algorithm>
#include <numbers>

namespace pfcs {

Field Field::from_values(GridGeom g, std::vector<double> values, std::string tag) {
    g.validate();
    if (static_cast<int>(values.size()) != g.n_cells)
        throw UsageError("Field::from_values: size does not match geometry");
    Field f;
    f.geom_ = g;
    f.v_ = std::move(values);
    f.tag_ = std::move(tag);
    return f;
}

Field Field::sampled(GridGeom g, const std::function<double(double)>& f, std::string tag) {
    Field out(g, 0.0, std::move(tag));
    for (int i = 0; i < g.n_cells; ++i) out[i] = f(g.cell_center(i));
    return out;
}

Field& Field::operator+=(const Field& o) {
    require_same_geom(*this, o);
    for (size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
}

Field& Field::operator-=(const Field& o) {
    require_same_geom(*this, o);
    for (size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
}

Field& Field::operator*=(double c) {
    for (double& x : v_) x *= c;
    return *this;
}

Field& Field::add_scaled(const Field& o, double c) {
    require_same_geom(*this, o);
    for (size_t i = 0; i < v_.size(); ++i) v_[i] += c * o.v_[i];
    return *this;
}

Field& Field::shift(double c) {
    for (double& x : v_) x += c;
    return *this;
}

Field operator+(Field a, const Field& b) { a += b; return a; }
Field operator-(Field a, const Field& b) { a -= b; return a; }
Field operator*(double c, Field a) { a *= c; return a; }

void require_same_geom(const Field& a, const Field& b) {
    if (!(a.geom() == b.geom()))
        throw UsageError("fields live on different geometries");
}

Field neg_laplacian(const Field& u) {
    const int n = u.size();
    if (n < 2) throw UsageError("neg_laplacian: need n_cells >= 2");
    const double inv_dx2 = 1.0 / (u.geom().dx() * u.geom().dx());
    Field out(u.geom());
    out[0] = (u[0] - u[1]) * inv_dx2;
    for (int i = 1; i + 1 < n; ++i)
        out[i] = (2.0 * u[i] - u[i - 1] - u[i + 1]) * inv_dx2;
    out[n - 1] = (u[n - 1] - u[n - 2]) * inv_dx2;
    return out;
}

double mean(const Field& u) {
    double s = 0.0;
    for (double x : u.values()) s += x;
    return s / u.size();
}

double inner_h(const Field& a, const Field& b) {
    require_same_geom(a, b);
    double s = 0.0;
    for (int i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * a.geom().dx();
}

double norm_h(const Field& u) { return std::sqrt(inner_h(u, u)); }

double grad_norm_sq(const Field& u) {
    double s = 0.0;
    for (int i = 0; i + 1 < u.size(); ++i) {
        const double d = u[i + 1] - u[i];
        s += d * d;
    }
    return s / u.geom().dx();
}

double norm_v(const Field& u) {
    return std::sqrt(grad_norm_sq(u) + inner_h(u, u));
}

Field solve_shifted_neumann(double c, const Field& rhs) {
    if (!(c > 0.0)) throw UsageError("solve_shifted_neumann: shift must be > 0");
    const int n = rhs.size();
    if (n < 2) throw UsageError("solve_shifted_neumann: need n_cells >= 2");
    const double r = c / (rhs.geom().dx() * rhs.geom().dx());

    // Thomas elimination on the SPD tridiagonal I + cA (diagonally dominant).
    std::vector<double> diag(static_cast<size_t>(n));
    const double off = -r;
    diag[0] = 1.0 + r;
    for (int i = 1; i + 1 < n; ++i) diag[static_cast<size_t>(i)] = 1.0 + 2.0 * r;
    diag[static_cast<size_t>(n - 1)] = 1.0 + r;

    Field x = rhs;
    for (int i = 1; i < n; ++i) {
        const double m = off / diag[static_cast<size_t>(i - 1)];
        diag[static_cast<size_t>(i)] -= m * off;
        x[i] -= m * x[i - 1];
    }
    x[n - 1] /= diag[static_cast<size_t>(n - 1)];
    for (int i = n - 2; i >= 0; --i)
        x[i] = (x[i] - off * x[i + 1]) / diag[static_cast<size_t>(i)];

    // Constants are fixed points of (I + cA)^{-1}; restore the mean exactly.
    x.shift(mean(rhs) - mean(x));
    return x;
}

Field resolvent_neumann(double lambda, const Field& u) {
    if (!(lambda > 0.0)) throw UsageError("resolvent_neumann: lambda must be > 0");
    return solve_shifted_neumann(lambda, u);
}

Field yosida_neumann(double lambda, const Field& u) {
    if (!(lambda > 0.0)) throw UsageError("yosida_neumann: lambda must be > 0");
    Field j = resolvent_neumann(lambda, u);
    Field out = u;
    out -= j;
    out *= 1.0 / lambda;
    // Exact kernel bookkeeping: m((-Δ_N)_λ u) = 0.
    out.shift(-mean(out));
    return out;
}

Field inverse_neumann(const Field& psi, double mean_rtol) {
    const int n = psi.size();
    const double m = mean(psi);
    double rms = norm_h(psi) / std::sqrt(psi.geom().length);
    if (std::abs(m) > mean_rtol * (1.0 + rms))
        throw DomainError("inverse_neumann: input has nonzero mean " + std::to_string(m));

    // Flux integration with zero boundary flux: g_{i+1/2} = dx·Σ_{j<=i} ψ_j,
    // u_{i+1} = u_i - dx·g_{i+1/2}. The residual mean is projected out first
    // so A u = ψ - m(ψ) holds exactly row by row.
    const double dx = psi.geom().dx();
    Field u(psi.geom());
    double g = 0.0;
    u[0] = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        g += dx * (psi[i] - m);
        u[i + 1] = u[i] - dx * g;
    }
    u.shift(-mean(u));
    return u;
}

double dual_norm(const Field& psi) {
    const double m = mean(psi);
    Field zero_mean = psi;
    zero_mean.shift(-m);
    Field u = inverse_neumann(zero_mean, 1e30); // projection already applied
    return std::sqrt(grad_norm_sq(u) + m * m);
}

Field riesz_inverse(const Field& psi) {
    return solve_shifted_neumann(1.0, psi);
}

double dual_norm_riesz(const Field& psi) {
    return std::sqrt(std::max(0.0, inner_h(psi, riesz_inverse(psi))));
}

double neumann_eigenvalue(const GridGeom& g, int k) {
    if (k < 0 || k >= g.n_cells) throw UsageError("neumann_eigenvalue: mode out of range");
    const double dx = g.dx();
    return 2.0 / (dx * dx) * (1.0 - std::cos(k * std::numbers::pi / g.n_cells));
}

Field cosine_mode(const GridGeom& g, int k, double amplitude, double offset) {
    return Field::sampled(g, [&](double x) {
        return offset + amplitude * std::cos(k * std::numbers::pi * x / g.length);
    });
}

} // namespace pfcs
