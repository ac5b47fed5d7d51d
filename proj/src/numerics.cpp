#include "mollow/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/SparseCore>

#include "mollow/errors.hpp"

namespace mollow::numerics {

CMatrix kronecker(const CMatrix& a, const CMatrix& b) {
  const Eigen::Index rb = b.rows();
  const Eigen::Index cb = b.cols();
  CMatrix out(a.rows() * rb, a.cols() * cb);
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix adjoint(const CMatrix& m) { return m.adjoint(); }

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double relative_residual(const CMatrix& a, const CVector& x, const CVector& b) {
  const double denom =
      a.cwiseAbs().rowwise().sum().maxCoeff() * x.lpNorm<Eigen::Infinity>() +
      b.lpNorm<Eigen::Infinity>();
  const double r = (a * x - b).lpNorm<Eigen::Infinity>();
  if (denom == 0.0) return r == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return r / denom;
}

CVector lu_solve(const CMatrix& a, const CVector& b) {
  if (a.rows() != a.cols()) throw std::invalid_argument("lu_solve: matrix is not square");
  if (a.rows() != b.size()) throw std::invalid_argument("lu_solve: right-hand side has wrong size");

  const double scale = max_abs(a);
  Eigen::PartialPivLU<CMatrix> lu(a);
  const double min_pivot =
      a.rows() == 0 ? 0.0 : lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (scale == 0.0 || min_pivot < kLuPivotFloor * scale) {
    std::ostringstream msg;
    msg << "lu_solve: pivot " << min_pivot << " below " << kLuPivotFloor << " * max|A| (" << scale
        << ")";
    throw SingularMatrix(msg.str());
  }

  CVector x = lu.solve(b);
  double residual = relative_residual(a, x, b);
  for (int pass = 0; pass < kLuRefinementPasses && residual > 0.0; ++pass) {
    const CVector correction = lu.solve(b - a * x);
    const CVector refined = x + correction;
    const double refined_residual = relative_residual(a, refined, b);
    if (refined_residual >= residual) break;
    x = refined;
    residual = refined_residual;
  }
  if (!(residual <= kLuResidualBound)) {
    std::ostringstream msg;
    msg << "lu_solve: relative residual " << residual << " exceeds " << kLuResidualBound;
    throw SingularMatrix(msg.str());
  }
  return x;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kMinShrink = 0.2;
constexpr double kMaxGrowth = 5.0;
constexpr double kUnderflowFraction = 1e-12;

// Dormand-Prince 5(4) with FSAL; apply(out, in) evaluates out = L * in.
template <class Apply>
std::vector<CVector> dormand_prince(Apply&& apply, const CVector& v0, std::span<const double> taus,
                                    double rel_tol) {
  std::vector<CVector> out;
  out.reserve(taus.size());
  if (taus.empty()) return out;

  const double t_end = taus.back();
  const double h_min = kUnderflowFraction * t_end;
  const Eigen::Index n = v0.size();

  CVector y = v0;
  CVector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  CVector stage(n), y_new(n), err(n);
  apply(k1, y);

  double h = t_end;
  {
    const double ny = y.lpNorm<Eigen::Infinity>();
    const double nf = k1.lpNorm<Eigen::Infinity>();
    if (ny > 0.0 && nf > 0.0) h = std::min(h, 0.01 * ny / nf);
  }

  double t = 0.0;
  for (const double target : taus) {
    while (t < target) {
      const bool clipped = h >= target - t;
      const double step = clipped ? target - t : h;

      stage = y + step * a21 * k1;
      apply(k2, stage);
      stage = y + step * (a31 * k1 + a32 * k2);
      apply(k3, stage);
      stage = y + step * (a41 * k1 + a42 * k2 + a43 * k3);
      apply(k4, stage);
      stage = y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      apply(k5, stage);
      stage = y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      apply(k6, stage);
      y_new = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      apply(k7, y_new);
      err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      const double scale =
          rel_tol * std::max(y.lpNorm<Eigen::Infinity>(), y_new.lpNorm<Eigen::Infinity>());
      const double err_norm = err.lpNorm<Eigen::Infinity>();
      const double ratio = scale > 0.0 ? err_norm / scale : (err_norm > 0.0 ? 1e300 : 0.0);

      if (ratio <= 1.0) {
        t = clipped ? target : t + step;
        y.swap(y_new);
        k1.swap(k7);
        if (!clipped) {
          const double factor =
              ratio == 0.0 ? kMaxGrowth
                           : std::clamp(kSafety * std::pow(ratio, -0.2), kMinShrink, kMaxGrowth);
          h = step * factor;
        }
      } else {
        h = step * std::max(kMinShrink, kSafety * std::pow(ratio, -0.2));
        if (h < h_min) {
          std::ostringstream msg;
          msg << "ode_propagate: step " << h << " collapsed below " << h_min << " at t=" << t;
          throw StepUnderflow(msg.str());
        }
      }
    }
    out.push_back(y);
  }
  return out;
}

// Liouvillians of composite systems are mostly zeros; above this fill the dense product wins.
constexpr double kSparseFill = 0.1;

} // namespace

std::vector<CVector> ode_propagate(const CMatrix& generator, const CVector& v0,
                                   std::span<const double> taus, double rel_tol) {
  if (generator.rows() != generator.cols() || generator.rows() != v0.size()) {
    throw std::invalid_argument("ode_propagate: generator and state dimensions disagree");
  }
  if (!(rel_tol > 0.0 && rel_tol <= 1e-3)) {
    throw std::invalid_argument("ode_propagate: rel_tol must lie in (0, 1e-3]");
  }
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!(taus[i] >= 0.0) || (i > 0 && taus[i] < taus[i - 1])) {
      throw std::invalid_argument("ode_propagate: taus must be non-negative and ascending");
    }
  }

  const auto nnz = (generator.array() != complex(0.0, 0.0)).count();
  if (static_cast<double>(nnz) < kSparseFill * static_cast<double>(generator.size())) {
    const Eigen::SparseMatrix<complex, Eigen::RowMajor> sparse = generator.sparseView(complex(0.0, 0.0), 0.0);
    return dormand_prince([&](CVector& out, const CVector& in) { out.noalias() = sparse * in; }, v0, taus,
                          rel_tol);
  }
  return dormand_prince([&](CVector& out, const CVector& in) { out.noalias() = generator * in; }, v0, taus,
                        rel_tol);
}

} // namespace mollow::numerics
