#include "mollow/liouville.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "mollow/errors.hpp"

namespace mollow::liouville {

using numerics::kronecker;

HilbertSpace::HilbertSpace(std::vector<int> factor_dims) : factor_dims_(std::move(factor_dims)) {
  if (factor_dims_.empty()) throw std::invalid_argument("HilbertSpace: no factors");
  for (int d : factor_dims_) {
    if (d < 1) throw std::invalid_argument("HilbertSpace: factor dimension must be positive");
  }
  dim_ = std::accumulate(factor_dims_.begin(), factor_dims_.end(), 1, std::multiplies<>());
}

Operator::Operator(HilbertSpace space_, CMatrix matrix_)
    : space(std::move(space_)), matrix(std::move(matrix_)) {
  if (matrix.rows() != space.dim() || matrix.cols() != space.dim()) {
    throw DimensionMismatch("Operator: matrix shape does not match the Hilbert space");
  }
}

Operator Operator::adjoint() const { return {space, matrix.adjoint()}; }

Operator Operator::pow(int power) const {
  if (power < 0) throw std::invalid_argument("Operator::pow: negative power");
  CMatrix out = CMatrix::Identity(space.dim(), space.dim());
  for (int i = 0; i < power; ++i) out = (out * matrix).eval();
  return {space, std::move(out)};
}

Operator Operator::identity(const HilbertSpace& space) {
  return {space, CMatrix::Identity(space.dim(), space.dim())};
}

Operator Operator::zero(const HilbertSpace& space) {
  return {space, CMatrix::Zero(space.dim(), space.dim())};
}

namespace {

void require_same_space(const HilbertSpace& a, const HilbertSpace& b, const char* where) {
  if (!(a == b)) throw DimensionMismatch(std::string(where) + ": operators live on different spaces");
}

} // namespace

Operator operator*(const Operator& a, const Operator& b) {
  require_same_space(a.space, b.space, "operator*");
  return {a.space, a.matrix * b.matrix};
}

Operator operator+(const Operator& a, const Operator& b) {
  require_same_space(a.space, b.space, "operator+");
  return {a.space, a.matrix + b.matrix};
}

Operator operator-(const Operator& a, const Operator& b) {
  require_same_space(a.space, b.space, "operator-");
  return {a.space, a.matrix - b.matrix};
}

Operator operator*(complex s, const Operator& a) { return {a.space, s * a.matrix}; }

DensityMatrix::DensityMatrix(HilbertSpace space, CMatrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != space_.dim() || matrix_.cols() != space_.dim()) {
    throw DimensionMismatch("DensityMatrix: matrix shape does not match the Hilbert space");
  }
  const double herm = numerics::max_abs(matrix_ - matrix_.adjoint());
  if (herm > kHermiticityTol) throw std::invalid_argument("DensityMatrix: not Hermitian");
  if (std::abs(matrix_.trace() - 1.0) > kTraceTol) {
    throw std::invalid_argument("DensityMatrix: trace differs from 1");
  }
  matrix_ = (0.5 * (matrix_ + matrix_.adjoint())).eval();
  if (min_eigenvalue() < kPositivityTol) throw std::invalid_argument("DensityMatrix: not positive");
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(matrix_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

CVector vectorize(const CMatrix& m) { return Eigen::Map<const CVector>(m.data(), m.size()); }

CMatrix unvectorize(const CVector& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim) {
    throw DimensionMismatch("unvectorize: vector length is not dim^2");
  }
  return Eigen::Map<const CMatrix>(v.data(), dim, dim);
}

CMatrix lowering_op(int dim) {
  if (dim < 2) throw std::invalid_argument("lowering_op: dim must be at least 2");
  CMatrix a = CMatrix::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

Operator embed(const CMatrix& local_op, std::size_t which_factor, const HilbertSpace& space) {
  if (which_factor >= space.factors()) {
    throw DimensionMismatch("embed: factor index out of range");
  }
  const int local_dim = space.factor_dims()[which_factor];
  if (local_op.rows() != local_dim || local_op.cols() != local_dim) {
    std::ostringstream msg;
    msg << "embed: local operator is " << local_op.rows() << "x" << local_op.cols()
        << " but factor " << which_factor << " has dimension " << local_dim;
    throw DimensionMismatch(msg.str());
  }
  CMatrix out = CMatrix::Identity(1, 1);
  for (std::size_t f = 0; f < space.factors(); ++f) {
    const int d = space.factor_dims()[f];
    out = kronecker(out, f == which_factor ? local_op : CMatrix::Identity(d, d));
  }
  return {space, std::move(out)};
}

Liouvillian build_liouvillian(const Operator& hamiltonian, std::span<const LindbladTerm> terms) {
  const HilbertSpace& space = hamiltonian.space;
  const int d = space.dim();
  const CMatrix id = CMatrix::Identity(d, d);
  const complex i_unit{0.0, 1.0};

  // vec(A X B) = (B^T x A) vec(X)
  CMatrix l = -i_unit * (kronecker(id, hamiltonian.matrix) -
                         kronecker(hamiltonian.matrix.transpose(), id));
  for (const LindbladTerm& term : terms) {
    require_same_space(space, term.collapse.space, "build_liouvillian");
    if (!(term.rate >= 0.0)) throw std::invalid_argument("build_liouvillian: negative rate");
    if (term.rate == 0.0) continue;
    const CMatrix& c = term.collapse.matrix;
    const CMatrix cdc = c.adjoint() * c;
    l += (term.rate / 2.0) * (2.0 * kronecker(c.conjugate(), c) - kronecker(id, cdc) -
                              kronecker(cdc.transpose(), id));
  }
  return {space, std::move(l)};
}

DensityMatrix steady_state(const Liouvillian& l) {
  const int d = l.space.dim();
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  CMatrix system = l.matrix;
  system.row(0).setZero();
  for (int i = 0; i < d; ++i) system(0, static_cast<Eigen::Index>(i) * (d + 1)) = 1.0;
  CVector rhs = CVector::Zero(n);
  rhs(0) = 1.0;

  CVector v;
  try {
    v = numerics::lu_solve(system, rhs);
  } catch (const SingularMatrix& e) {
    throw NonUniqueSteadyState(std::string("steady_state: ") + e.what());
  }

  const double l_norm = l.matrix.cwiseAbs().rowwise().sum().maxCoeff();
  const double residual = (l.matrix * v).lpNorm<Eigen::Infinity>();
  if (residual > kSteadyStateResidual * l_norm) {
    std::ostringstream msg;
    msg << "steady_state: residual " << residual << " exceeds " << kSteadyStateResidual
        << " * ||L|| = " << kSteadyStateResidual * l_norm;
    throw NonUniqueSteadyState(msg.str());
  }
  try {
    return DensityMatrix(l.space, unvectorize(v, d));
  } catch (const std::invalid_argument& e) {
    throw NonUniqueSteadyState(std::string("steady_state: ") + e.what());
  }
}

complex expectation(const DensityMatrix& rho, const Operator& a) {
  require_same_space(rho.space(), a.space, "expectation");
  // Tr(A rho) without forming the product.
  return (a.matrix.transpose().cwiseProduct(rho.matrix())).sum();
}

std::vector<complex> propagate_expectation(const Liouvillian& l, const CMatrix& initial,
                                           const Operator& b, std::span<const double> taus,
                                           double rel_tol) {
  require_same_space(l.space, b.space, "propagate_expectation");
  const int d = l.space.dim();
  if (initial.rows() != d || initial.cols() != d) {
    throw DimensionMismatch("propagate_expectation: initial matrix has wrong shape");
  }
  // Tr(B X) = sum_k vec(B^T)_k vec(X)_k
  const CMatrix bt = b.matrix.transpose();
  const CVector w = vectorize(bt);
  const auto states = numerics::ode_propagate(l.matrix, vectorize(initial), taus, rel_tol);
  std::vector<complex> out;
  out.reserve(states.size());
  for (const CVector& s : states) out.push_back(w.transpose() * s);
  return out;
}

std::vector<complex> two_time_correlator(const Liouvillian& l, const DensityMatrix& rho,
                                         const Operator& a, const Operator& b,
                                         std::span<const double> taus, double rel_tol) {
  require_same_space(rho.space(), a.space, "two_time_correlator");
  const CMatrix sandwiched = a.matrix * rho.matrix() * a.matrix.adjoint();
  return propagate_expectation(l, sandwiched, b, taus, rel_tol);
}

} // namespace mollow::liouville
