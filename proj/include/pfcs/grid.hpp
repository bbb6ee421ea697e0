// grid.hpp
// Uniform 1D cell-centered mesh and the discrete stand-ins for the Hilbert
// triplet (V, H, V*): Neumann Laplacian A = -Δ_N, mean value m(·), H/V inner
// products, resolvent J_λ = (I + λA)^{-1}, Yosida operator (-Δ_N)_λ, the
// inverse operator N on zero-mean fields, the duality-map inverse, and the
// H^{-1}-type dual norm ‖·‖_*.
//
// The mesh is cell-centered so that A has exact zero row sums: constants are
// exactly in the kernel, the mean of A u vanishes, and every mean-value law
// of the semidiscrete dynamics holds without spatial error.

#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pfcs/errors.hpp"

namespace pfcs {

struct GridGeom {
    int n_cells = 128;
    double length = 1.0;

    double dx() const { return length / n_cells; }
    double cell_center(int i) const { return (i + 0.5) * dx(); }
    bool operator==(const GridGeom&) const = default;

    void validate() const {
        if (n_cells < 2) throw UsageError("GridGeom: n_cells must be >= 2");
        if (!(length > 0.0)) throw UsageError("GridGeom: length must be > 0");
    }
};

// Grid function on cell centers. Carries its geometry and an optional
// quantity tag (used for CSV headers).
class Field {
public:
    Field() = default;
    explicit Field(GridGeom g, double fill = 0.0, std::string tag = {})
        : geom_(g), v_(static_cast<size_t>(g.n_cells), fill), tag_(std::move(tag)) {}

    static Field from_values(GridGeom g, std::vector<double> values, std::string tag = {});
    // Sample f(x) at cell centers.
    static Field sampled(GridGeom g, const std::function<double(double)>& f, std::string tag = {});

    int size() const { return static_cast<int>(v_.size()); }
    const GridGeom& geom() const { return geom_; }
    const std::string& tag() const { return tag_; }
    void set_tag(std::string t) { tag_ = std::move(t); }

    double operator[](int i) const { return v_[static_cast<size_t>(i)]; }
    double& operator[](int i) { return v_[static_cast<size_t>(i)]; }
    std::span<const double> values() const { return v_; }
    std::span<double> values() { return v_; }

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(double c);
    Field& add_scaled(const Field& o, double c); // this += c * o
    Field& shift(double c);                      // this += c (constant)

private:
    GridGeom geom_;
    std::vector<double> v_;
    std::string tag_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double c, Field a);

void require_same_geom(const Field& a, const Field& b);

// A u with homogeneous Neumann mirror ghosts: (Au)_i = (2u_i - u_{i-1} - u_{i+1})/dx².
Field neg_laplacian(const Field& u);

// Arithmetic average; on uniform cells this equals (1/|Ω|)∫u.
double mean(const Field& u);

double inner_h(const Field& a, const Field& b); // dx·Σ a_i b_i
double norm_h(const Field& u);
double grad_norm_sq(const Field& u); // Σ_faces (u_{i+1}-u_i)²/dx
double norm_v(const Field& u);       // (‖∇u‖² + ‖u‖²)^{1/2}

// Direct tridiagonal solve of (I + cA) x = rhs, c > 0, followed by an exact
// mean restore (constants are fixed points, so m(x) = m(rhs)).
Field solve_shifted_neumann(double c, const Field& rhs);

// J_λ u = (I + λA)^{-1} u.
Field resolvent_neumann(double lambda, const Field& u);

// (-Δ_N)_λ u = (u - J_λ u)/λ; output mean-corrected to exactly zero.
Field yosida_neumann(double lambda, const Field& u);

// N ψ: the zero-mean solution of A u = ψ for zero-mean ψ (flux integration,
// then mean subtraction). Throws DomainError when |m(ψ)| exceeds
// mean_rtol·(1 + rms(ψ)). The residual mean is projected out before solving.
Field inverse_neumann(const Field& psi, double mean_rtol = 1e-8);

// ‖ψ‖_*² = ‖∇N(ψ - m(ψ))‖² + |m(ψ)|².
double dual_norm(const Field& psi);

// F^{-1} ψ: solve (I + A) u = ψ, so (u, v)_V = (ψ, v)_H for all v.
Field riesz_inverse(const Field& psi);

// Standard dual norm ⟨ψ, F^{-1}ψ⟩^{1/2}.
double dual_norm_riesz(const Field& psi);

// Exact discrete eigenvalue of A for the cosine mode k = 0..n-1:
// μ_k = (2/dx²)(1 - cos(kπ/n)).
double neumann_eigenvalue(const GridGeom& g, int k);

// offset + amplitude·cos(kπx/L) sampled at cell centers (exact eigenvector of A).
Field cosine_mode(const GridGeom& g, int k, double amplitude = 1.0, double offset = 0.0);

} // namespace pfcs
