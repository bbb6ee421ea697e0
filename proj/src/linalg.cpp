#include "pfcs/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace pfcs {

DenseMatrix DenseMatrix::identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& o) {
    if (r_ != o.r_ || c_ != o.c_) throw UsageError("DenseMatrix: shape mismatch");
    for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) {
    for (double& x : a_) x *= s;
    return *this;
}

double DenseMatrix::inf_norm() const {
    double best = 0.0;
    for (int i = 0; i < r_; ++i) {
        double row = 0.0;
        for (int j = 0; j < c_; ++j) row += std::abs((*this)(i, j));
        best = std::max(best, row);
    }
    return best;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw UsageError("matmul: shape mismatch");
    DenseMatrix out(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

std::vector<double> matvec(const DenseMatrix& a, const std::vector<double>& x) {
    if (a.cols() != static_cast<int>(x.size())) throw UsageError("matvec: shape mismatch");
    std::vector<double> y(static_cast<size_t>(a.rows()), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[static_cast<size_t>(j)];
        y[static_cast<size_t>(i)] = s;
    }
    return y;
}

LuFactors lu_factor(DenseMatrix a) {
    if (a.rows() != a.cols()) throw UsageError("lu_factor: need square matrix");
    const int n = a.rows();
    std::vector<int> perm(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;

    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > best) {
                best = std::abs(a(i, k));
                piv = i;
            }
        }
        if (best == 0.0) throw SolverError("lu_factor: singular matrix", 0.0, k);
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(perm[static_cast<size_t>(k)], perm[static_cast<size_t>(piv)]);
        }
        for (int i = k + 1; i < n; ++i) {
            a(i, k) /= a(k, k);
            const double lik = a(i, k);
            if (lik == 0.0) continue;
            for (int j = k + 1; j < n; ++j) a(i, j) -= lik * a(k, j);
        }
    }
    return {std::move(a), std::move(perm)};
}

std::vector<double> lu_solve(const LuFactors& f, std::vector<double> b) {
    const int n = f.lu.rows();
    if (static_cast<int>(b.size()) != n) throw UsageError("lu_solve: size mismatch");
    std::vector<double> x(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = b[static_cast<size_t>(f.perm[static_cast<size_t>(i)])];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) x[static_cast<size_t>(i)] -= f.lu(i, j) * x[static_cast<size_t>(j)];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[static_cast<size_t>(i)] -= f.lu(i, j) * x[static_cast<size_t>(j)];
        x[static_cast<size_t>(i)] /= f.lu(i, i);
    }
    return x;
}

DenseMatrix expm(const DenseMatrix& a) {
    if (a.rows() != a.cols()) throw UsageError("expm: need square matrix");
    const int n = a.rows();

    // Scaling: bring ||A/2^s|| under ~5.4 (Padé-13 region).
    const double norm = a.inf_norm();
    int s = 0;
    double scale = 1.0;
    while (norm * scale > 5.4) {
        scale *= 0.5;
        ++s;
    }
    DenseMatrix m = a;
    m *= scale;

    static const double c[14] = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0,  129060195264000.0,   10559470521600.0,
        670442572800.0,      33522128640.0,       1323241920.0,
        40840800.0,          960960.0,            16380.0,
        182.0,               1.0};

    const DenseMatrix m2 = matmul(m, m);
    const DenseMatrix m4 = matmul(m2, m2);
    const DenseMatrix m6 = matmul(m4, m2);
    const DenseMatrix id = DenseMatrix::identity(n);

    auto lincomb = [&](double c6, double c4, double c2, double c0) {
        DenseMatrix out = m6;
        out *= c6;
        DenseMatrix t = m4; t *= c4; out += t;
        t = m2; t *= c2; out += t;
        t = id; t *= c0; out += t;
        return out;
    };

    // U = M (M6 (c13 M6 + c11 M4 + c9 M2) + c7 M6 + c5 M4 + c3 M2 + c1 I)
    DenseMatrix u_inner = matmul(m6, lincomb(c[13], c[11], c[9], 0.0));
    u_inner += lincomb(c[7], c[5], c[3], c[1]);
    const DenseMatrix u = matmul(m, u_inner);

    // V = M6 (c12 M6 + c10 M4 + c8 M2) + c6 M6 + c4 M4 + c2 M2 + c0 I
    DenseMatrix v = matmul(m6, lincomb(c[12], c[10], c[8], 0.0));
    v += lincomb(c[6], c[4], c[2], c[0]);

    // Solve (V - U) X = (V + U) column by column.
    DenseMatrix vm = v, vp = v;
    {
        DenseMatrix negu = u; negu *= -1.0;
        vm += negu;
        vp += u;
    }
    const LuFactors f = lu_factor(vm);
    DenseMatrix x(n, n);
    std::vector<double> col(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) col[static_cast<size_t>(i)] = vp(i, j);
        const std::vector<double> sol = lu_solve(f, col);
        for (int i = 0; i < n; ++i) x(i, j) = sol[static_cast<size_t>(i)];
    }

    for (int k = 0; k < s; ++k) x = matmul(x, x);
    return x;
}

} // namespace pfcs
