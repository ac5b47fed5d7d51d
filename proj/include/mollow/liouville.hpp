#pragma once

#include <span>
#include <vector>

#include "mollow/numerics.hpp"

namespace mollow::liouville {

using numerics::CMatrix;
using numerics::complex;
using numerics::CVector;

/// Ordered tensor-product space, e.g. {2, n1+1, n2+1} for emitter x two sensors.
class HilbertSpace {
public:
  explicit HilbertSpace(std::vector<int> factor_dims);

  const std::vector<int>& factor_dims() const { return factor_dims_; }
  int dim() const { return dim_; }
  std::size_t factors() const { return factor_dims_.size(); }

  friend bool operator==(const HilbertSpace&, const HilbertSpace&) = default;

private:
  std::vector<int> factor_dims_;
  int dim_ = 1;
};

struct Operator {
  HilbertSpace space;
  CMatrix matrix;

  Operator(HilbertSpace space, CMatrix matrix);

  Operator adjoint() const;
  /// Integer power; power 0 gives the identity.
  Operator pow(int power) const;

  static Operator identity(const HilbertSpace& space);
  static Operator zero(const HilbertSpace& space);
};

Operator operator*(const Operator& a, const Operator& b);
Operator operator+(const Operator& a, const Operator& b);
Operator operator-(const Operator& a, const Operator& b);
Operator operator*(complex s, const Operator& a);

/// Hermitian, unit-trace, positive state. The constructor enforces those
/// invariants and throws std::invalid_argument when any of them fails.
class DensityMatrix {
public:
  static constexpr double kHermiticityTol = 1e-10;
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kPositivityTol = -1e-8;

  DensityMatrix(HilbertSpace space, CMatrix matrix);

  const HilbertSpace& space() const { return space_; }
  const CMatrix& matrix() const { return matrix_; }
  double min_eigenvalue() const;

private:
  HilbertSpace space_;
  CMatrix matrix_;
};

struct LindbladTerm {
  double rate;
  Operator collapse;
};

struct Liouvillian {
  HilbertSpace space;
  CMatrix matrix;
};

/// Column-stacking vectorization: vec(X)[i + j*d] = X(i, j).
CVector vectorize(const CMatrix& m);
CMatrix unvectorize(const CVector& v, int dim);

/// Lowering operator truncated to `dim` levels: <k-1|a|k> = sqrt(k).
CMatrix lowering_op(int dim);

/// I x ... x local_op x ... x I with local_op acting on factor `which_factor`.
Operator embed(const CMatrix& local_op, std::size_t which_factor, const HilbertSpace& space);

/// Superoperator of drho/dt = -i[H, rho] + sum rate/2 (2 c rho c^+ - c^+c rho - rho c^+c).
Liouvillian build_liouvillian(const Operator& hamiltonian, std::span<const LindbladTerm> terms);

/// Unique steady state by replacing the first equation of L v = 0 with the
/// trace condition. Throws NonUniqueSteadyState if the result is not a valid
/// state or fails the residual check ||L vec(rho)|| <= 1e-9 ||L||.
DensityMatrix steady_state(const Liouvillian& l);

inline constexpr double kSteadyStateResidual = 1e-9;

complex expectation(const DensityMatrix& rho, const Operator& a);

inline constexpr double kDefaultRelTol = 1e-9;

/// C(tau) = Tr[B exp(L tau)(A rho A^+)] via one propagation pass.
std::vector<complex> two_time_correlator(const Liouvillian& l, const DensityMatrix& rho,
                                         const Operator& a, const Operator& b,
                                         std::span<const double> taus,
                                         double rel_tol = kDefaultRelTol);

/// Lower-level entry point: Tr[B X(tau)] for an arbitrary initial matrix X(0).
std::vector<complex> propagate_expectation(const Liouvillian& l, const CMatrix& initial,
                                           const Operator& b, std::span<const double> taus,
                                           double rel_tol = kDefaultRelTol);

} // namespace mollow::liouville
