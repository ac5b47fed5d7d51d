#include "mollow/fluorescence.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mollow::fluorescence {

using liouville::CMatrix;

void EmitterParams::validate() const {
  if (!std::isfinite(gamma) || !(gamma > 0.0)) throw std::invalid_argument("emitter: gamma must be > 0");
  if (!std::isfinite(omega) || omega < 0.0) throw std::invalid_argument("emitter: omega must be >= 0");
  if (!std::isfinite(detuning)) throw std::invalid_argument("emitter: detuning must be finite");
}

liouville::HilbertSpace emitter_space() { return liouville::HilbertSpace({2}); }

Operator emitter_lowering() { return {emitter_space(), liouville::lowering_op(2)}; }

Operator emitter_hamiltonian(const EmitterParams& p) {
  p.validate();
  const Operator sigma = emitter_lowering();
  const CMatrix n = sigma.matrix.adjoint() * sigma.matrix;
  return {emitter_space(), p.detuning * n + p.omega * (sigma.matrix + sigma.matrix.adjoint())};
}

liouville::Liouvillian emitter_liouvillian(const EmitterParams& p) {
  const std::array terms{liouville::LindbladTerm{p.gamma, emitter_lowering()}};
  return liouville::build_liouvillian(emitter_hamiltonian(p), terms);
}

DressedQuantities dressed_splitting(const EmitterParams& p) {
  p.validate();
  const double splitting = std::sqrt(p.detuning * p.detuning + 4.0 * p.omega * p.omega);
  const double theta = 0.5 * std::atan2(2.0 * p.omega, p.detuning);
  return {splitting, theta};
}

double omega_for_splitting(double splitting, double detuning) {
  if (!(splitting >= std::abs(detuning))) {
    throw std::invalid_argument("omega_for_splitting: splitting must be >= |detuning|");
  }
  return 0.5 * std::sqrt(splitting * splitting - detuning * detuning);
}

BlochSteadyState bloch_steady_state(const EmitterParams& p) {
  p.validate();
  const double d = p.gamma * p.gamma / 4.0 + p.detuning * p.detuning;
  const double n = p.omega * p.omega / (d + 2.0 * p.omega * p.omega);
  const complex i_unit{0.0, 1.0};
  const complex coherence = i_unit * p.omega * (2.0 * n - 1.0) / complex(p.gamma / 2.0, p.detuning);
  return {n, coherence};
}

std::vector<double> unfiltered_g2(const EmitterParams& p, std::span<const double> taus,
                                  double rel_tol) {
  const auto l = emitter_liouvillian(p);
  const auto rho = liouville::steady_state(l);
  const Operator sigma = emitter_lowering();
  const Operator number = sigma.adjoint() * sigma;
  const double n = liouville::expectation(rho, number).real();
  const auto corr = liouville::two_time_correlator(l, rho, sigma, number, taus, rel_tol);
  std::vector<double> out;
  out.reserve(corr.size());
  for (const complex& c : corr) out.push_back(c.real() / (n * n));
  return out;
}

std::string_view to_string(SidebandOrder order) {
  return order == SidebandOrder::high_then_low ? "high_then_low" : "low_then_high";
}

SidebandOrder sideband_order_from_string(std::string_view name) {
  if (name == "high_then_low") return SidebandOrder::high_then_low;
  if (name == "low_then_high") return SidebandOrder::low_then_high;
  throw std::invalid_argument("unknown sideband order '" + std::string(name) + "'");
}

namespace {

// (exp(-a t) - exp(-b t)) / (b - a), continuous at a == b.
double exp_difference(double a, double b, double t) {
  const double x = b - a;
  if (x == 0.0) return t * std::exp(-a * t);
  return std::exp(-a * t) * (-std::expm1(-x * t)) / x;
}

} // namespace

std::vector<double> schrama_sideband_g2(const EmitterParams& p, double filter_linewidth,
                                        SidebandOrder which, std::span<const double> taus) {
  p.validate();
  if (!(filter_linewidth > 0.0)) throw std::invalid_argument("schrama_sideband_g2: linewidth must be > 0");
  if (!(p.omega > 0.0)) throw std::invalid_argument("schrama_sideband_g2: requires a driven emitter");

  // Secular rates between dressed states |+> = sin|g> + cos|e>, |-> = cos|g> - sin|e>.
  const double theta = dressed_splitting(p).mixing_angle;
  const double c4 = std::pow(std::cos(theta), 4);
  const double s4 = std::pow(std::sin(theta), 4);
  const double relax = p.gamma * (c4 + s4);
  const double pop_plus = s4 / (c4 + s4);
  const double pop_minus = c4 / (c4 + s4);

  // Emission-time excess correlation: 1 + after * exp(-relax u) for u > 0
  // (the ordered pair) and 1 + before * exp(-relax |u|) for u < 0.
  double after = pop_plus / pop_minus;
  double before = pop_minus / pop_plus;
  if (which == SidebandOrder::low_then_high) std::swap(after, before);

  // Both detections are delayed by independent exponential filter responses;
  // the delay difference is Laplace distributed with rate Gamma.
  const double g = filter_linewidth;
  const double a = relax;
  std::vector<double> out;
  out.reserve(taus.size());
  for (const double tau : taus) {
    const double t = std::abs(tau);
    const double fwd = tau >= 0.0 ? after : before;
    const double bwd = tau >= 0.0 ? before : after;
    const double excess =
        0.5 * g *
        (fwd * (std::exp(-a * t) / (g + a) + exp_difference(a, g, t)) + bwd * std::exp(-g * t) / (g + a));
    out.push_back(1.0 + excess);
  }
  return out;
}

} // namespace mollow::fluorescence
