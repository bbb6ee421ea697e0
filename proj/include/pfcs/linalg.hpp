// linalg.hpp
// Minimal dense linear algebra: row-major matrix, LU solve with partial
// pivoting, and a scaling-and-squaring Padé matrix exponential. Used by the
// Newton fallback of the implicit stepper and by the dense cross-check
// oracles in the acceptance suite.

#pragma once

#include <cstddef>
#include <vector>

#include "pfcs/errors.hpp"

namespace pfcs {

class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols, double fill = 0.0)
        : r_(rows), c_(cols), a_(static_cast<size_t>(rows) * cols, fill) {}

    static DenseMatrix identity(int n);

    int rows() const { return r_; }
    int cols() const { return c_; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }
    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }

    DenseMatrix& operator+=(const DenseMatrix& o);
    DenseMatrix& operator*=(double s);
    double inf_norm() const;

private:
    int r_ = 0, c_ = 0;
    std::vector<double> a_;
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
std::vector<double> matvec(const DenseMatrix& a, const std::vector<double>& x);

// PA = LU factorization in place; solve for multiple right-hand sides.
struct LuFactors {
    DenseMatrix lu;
    std::vector<int> perm;
};
LuFactors lu_factor(DenseMatrix a); // throws SolverError on singular pivot
std::vector<double> lu_solve(const LuFactors& f, std::vector<double> b);

// exp(A) by Padé-13 with scaling and squaring.
DenseMatrix expm(const DenseMatrix& a);

} // namespace pfcs
