#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mollow/errors.hpp"
#include "mollow/liouville.hpp"
#include "mollow/numerics.hpp"

using namespace mollow;
using numerics::CMatrix;
using numerics::complex;
using numerics::CVector;

namespace {

CMatrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  CMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = complex(dist(rng), dist(rng));
  return m;
}

// Random Lindblad generator on a d-level system (superoperator dimension d^2).
CMatrix random_liouvillian(int d, std::mt19937_64& rng) {
  using namespace liouville;
  HilbertSpace space({d});
  CMatrix h = random_matrix(d, d, rng);
  h = (h + h.adjoint()).eval() * 0.5;
  std::vector<LindbladTerm> terms;
  terms.push_back({1.0, Operator(space, lowering_op(d))});
  terms.push_back({0.3, Operator(space, random_matrix(d, d, rng) * 0.5)});
  return build_liouvillian(Operator(space, h), terms).matrix;
}

} // namespace

TEST_SUITE("numerics") {

TEST_CASE("kronecker of identities is the identity") {
  CHECK(numerics::kronecker(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)) == CMatrix::Identity(4, 4));
}

TEST_CASE("kronecker shape arithmetic") {
  const CMatrix k = numerics::kronecker(CMatrix::Ones(2, 2), CMatrix::Ones(3, 3));
  CHECK(k.rows() == 6);
  CHECK(k.cols() == 6);
  const CMatrix r = numerics::kronecker(CMatrix::Ones(2, 3), CMatrix::Ones(4, 5));
  CHECK(r.rows() == 8);
  CHECK(r.cols() == 15);
}

TEST_CASE("kronecker of sigma and a two-level boson, all 16 entries") {
  // sigma = |0><1| on both factors. The product maps |11> (index 3) to |00>
  // (index 0) and nothing else.
  CMatrix s = CMatrix::Zero(2, 2);
  s(0, 1) = 1.0;
  const CMatrix a = liouville::lowering_op(2);
  const CMatrix k = numerics::kronecker(s, a);
  for (int row = 0; row < 4; ++row) {
    for (int col = 0; col < 4; ++col) {
      const int i = row / 2, kk = row % 2, j = col / 2, l = col % 2;
      const complex expected = s(i, j) * a(kk, l);
      CHECK(k(row, col) == expected);
      CHECK(k(row, col) == complex(row == 0 && col == 3 ? 1.0 : 0.0, 0.0));
    }
  }
}

TEST_CASE("kronecker is associative entry by entry") {
  // Small Gaussian-integer entries keep every product exact, so both
  // groupings must agree bit for bit.
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> digit(-9, 9);
  auto integer_matrix = [&](int rows, int cols) {
    CMatrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) m(i, j) = complex(digit(rng), digit(rng));
    return m;
  };
  const CMatrix a = integer_matrix(2, 3), b = integer_matrix(3, 2), c = integer_matrix(2, 2);
  const CMatrix left = numerics::kronecker(numerics::kronecker(a, b), c);
  const CMatrix right = numerics::kronecker(a, numerics::kronecker(b, c));
  CHECK(left == right);
}

TEST_CASE("lu_solve with the identity returns the right-hand side") {
  std::mt19937_64 rng(1);
  const CVector b = random_matrix(4, 1, rng);
  CHECK(numerics::lu_solve(CMatrix::Identity(4, 4), b) == b);
}

TEST_CASE("lu_solve residual on random well-conditioned systems") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    CMatrix a = random_matrix(50, 50, rng);
    a.diagonal().array() += complex(20.0, 0.0);
    const CVector b = random_matrix(50, 1, rng);
    Eigen::JacobiSVD<CMatrix> svd(a);
    const double cond = svd.singularValues()(0) / svd.singularValues()(49);
    REQUIRE(cond < 1e6);
    const CVector x = numerics::lu_solve(a, b);
    CHECK(numerics::relative_residual(a, x, b) <= numerics::kLuResidualBound);
  }
}

TEST_CASE("lu_solve rejects singular systems") {
  CHECK_THROWS_AS(numerics::lu_solve(CMatrix::Zero(3, 3), CVector::Ones(3)), SingularMatrix);
  CMatrix rank_one = CMatrix::Ones(3, 3);
  CHECK_THROWS_AS(numerics::lu_solve(rank_one, CVector::Ones(3)), SingularMatrix);
  CHECK_THROWS_AS(numerics::lu_solve(CMatrix::Identity(3, 3), CVector::Ones(4)), std::invalid_argument);
}

TEST_CASE("ode_propagate with a zero generator leaves the state unchanged") {
  std::mt19937_64 rng(3);
  const CVector v0 = random_matrix(5, 1, rng);
  const std::vector<double> taus{0.0, 0.5, 3.0, 100.0};
  const auto out = numerics::ode_propagate(CMatrix::Zero(5, 5), v0, taus, 1e-8);
  REQUIRE(out.size() == taus.size());
  for (const auto& v : out) CHECK(v == v0);
}

TEST_CASE("ode_propagate scalar decay") {
  const CMatrix l = CMatrix::Constant(1, 1, -1.0);
  const CVector v0 = CVector::Ones(1);
  const std::vector<double> taus{1.0};
  for (double tol : {1e-6, 1e-9}) {
    const auto out = numerics::ode_propagate(l, v0, taus, tol);
    CHECK(std::abs(out[0](0) - std::exp(-1.0)) <= tol);
  }
}

TEST_CASE("ode_propagate lands on every requested time") {
  const CMatrix l = CMatrix::Constant(1, 1, complex(-0.5, 3.0));
  const std::vector<double> taus{0.0, 0.0, 0.1, 0.25, 2.0, 2.0, 7.5};
  const auto out = numerics::ode_propagate(l, CVector::Ones(1), taus, 1e-10);
  for (std::size_t k = 0; k < taus.size(); ++k) {
    CHECK(std::abs(out[k](0) - std::exp(complex(-0.5, 3.0) * taus[k])) < 1e-8);
  }
}

TEST_CASE("ode_propagate self-convergence on a 64-dimensional generator") {
  std::mt19937_64 rng(5);
  const CMatrix l = random_liouvillian(8, rng);
  REQUIRE(l.rows() == 64);
  CMatrix rho = random_matrix(8, 8, rng);
  rho = rho * rho.adjoint();
  rho /= rho.trace();
  const CVector v0 = liouville::vectorize(rho);
  const std::vector<double> taus{0.5, 2.0, 5.0};
  const auto coarse = numerics::ode_propagate(l, v0, taus, 1e-6);
  const auto fine = numerics::ode_propagate(l, v0, taus, 1e-7);
  for (std::size_t k = 0; k < taus.size(); ++k) {
    const double rel = (coarse[k] - fine[k]).lpNorm<Eigen::Infinity>() / fine[k].lpNorm<Eigen::Infinity>();
    CHECK(rel < 1e-6);
  }
}

TEST_CASE("ode_propagate conserves left null-vector functionals") {
  std::mt19937_64 rng(9);
  const CMatrix l = random_liouvillian(6, rng);
  const CVector w = liouville::vectorize(CMatrix::Identity(6, 6));
  REQUIRE((w.adjoint() * l).cwiseAbs().maxCoeff() < 1e-10);
  const CVector v0 = random_matrix(36, 1, rng);
  const complex w0 = w.dot(v0);
  std::vector<double> taus;
  for (int k = 0; k <= 20; ++k) taus.push_back(0.5 * k);
  const double tol = 1e-7;
  for (const auto& v : numerics::ode_propagate(l, v0, taus, tol)) {
    CHECK(std::abs(w.dot(v) - w0) <= 10.0 * tol * std::abs(w0));
  }
}

TEST_CASE("ode_propagate argument checks") {
  const CMatrix l = CMatrix::Identity(2, 2);
  const CVector v = CVector::Ones(2);
  const std::vector<double> ok{1.0}, descending{2.0, 1.0}, negative{-1.0};
  CHECK_THROWS_AS(numerics::ode_propagate(l, v, descending, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(numerics::ode_propagate(l, v, negative, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(numerics::ode_propagate(l, v, ok, 1e-2), std::invalid_argument);
  CHECK_THROWS_AS(numerics::ode_propagate(l, v, ok, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(numerics::ode_propagate(l, CVector::Ones(3), ok, 1e-6), std::invalid_argument);
  CHECK(numerics::ode_propagate(l, v, std::vector<double>{}, 1e-6).empty());
}

TEST_CASE("ode_propagate sparse and dense generators agree") {
  // A mostly-zero generator goes through the sparse product path.
  std::mt19937_64 rng(13);
  const int n = 60;
  CMatrix sparse = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    sparse(i, i) = complex(-1.0 - 0.01 * i, 0.2 * i);
    sparse(i, (i + 7) % n) = complex(0.1, 0.05);
  }
  CMatrix dense = sparse;
  dense.array() += complex(1e-300, 0.0);  // no exact zeros
  const CVector v0 = random_matrix(n, 1, rng);
  const std::vector<double> taus{0.3, 1.0, 4.0};
  const auto a = numerics::ode_propagate(sparse, v0, taus, 1e-9);
  const auto b = numerics::ode_propagate(dense, v0, taus, 1e-9);
  for (std::size_t k = 0; k < taus.size(); ++k) {
    CHECK((a[k] - b[k]).lpNorm<Eigen::Infinity>() < 1e-12 * std::max(1.0, b[k].lpNorm<Eigen::Infinity>()));
  }
}

} // TEST_SUITE
