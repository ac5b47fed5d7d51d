#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mollow::numerics {

using complex = std::complex<double>;

// Column-major storage throughout. vec() of a density matrix is therefore the
// raw column-stacked buffer and never needs an explicit reshuffle.
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

static_assert(!CMatrix::IsRowMajor, "storage order is column-major everywhere");

/// Kronecker product: entry (i*rows_B + k, j*cols_B + l) = A(i,j) * B(k,l).
CMatrix kronecker(const CMatrix& a, const CMatrix& b);

CMatrix adjoint(const CMatrix& m);

/// Largest entry magnitude.
double max_abs(const CMatrix& m);

/// Relative residual ||Ax - b|| / (||A|| ||x|| + ||b||) in the infinity norm.
double relative_residual(const CMatrix& a, const CVector& x, const CVector& b);

/// Dense LU solve with partial pivoting and up to two passes of iterative
/// refinement. Throws SingularMatrix when a pivot drops below
/// 1e-14 * max|A| or when the residual bound of 1e-10 is not reached.
CVector lu_solve(const CMatrix& a, const CVector& b);

inline constexpr double kLuPivotFloor = 1e-14;
inline constexpr double kLuResidualBound = 1e-10;
inline constexpr int kLuRefinementPasses = 2;

/// Integrates dv/dt = L v with the Dormand-Prince 5(4) pair and returns v at
/// every requested time. `taus` must be ascending and non-negative; one
/// forward pass covers the whole grid and steps are clipped to land exactly
/// on each output time.
std::vector<CVector> ode_propagate(const CMatrix& generator, const CVector& v0,
                                   std::span<const double> taus, double rel_tol);

} // namespace mollow::numerics
