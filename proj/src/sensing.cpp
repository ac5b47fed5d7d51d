#include "mollow/sensing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "mollow/errors.hpp"

namespace mollow::sensing {

using liouville::CMatrix;
using liouville::HilbertSpace;
using liouville::LindbladTerm;

void SensorSpec::validate() const {
  if (!std::isfinite(frequency)) throw std::invalid_argument("sensor: frequency must be finite");
  if (!std::isfinite(linewidth) || !(linewidth > 0.0)) {
    throw std::invalid_argument("sensor: linewidth must be > 0");
  }
  if (photons < 1) throw std::invalid_argument("sensor: photons must be >= 1");
  if (coupling && (!std::isfinite(*coupling) || *coupling < 0.0)) {
    throw std::invalid_argument("sensor: coupling must be >= 0");
  }
}

SensorSystem attach_sensors(const EmitterParams& p, std::span<const SensorSpec> sensors,
                            int extra_levels) {
  p.validate();
  if (sensors.empty() || sensors.size() > kMaxSensors) {
    std::ostringstream msg;
    msg << "attach_sensors: " << sensors.size() << " sensors requested, supported range is 1.."
        << kMaxSensors;
    throw UnsupportedSensorCount(msg.str());
  }
  if (extra_levels < 0) throw std::invalid_argument("attach_sensors: extra_levels must be >= 0");

  std::vector<int> dims{2};
  for (const SensorSpec& s : sensors) {
    s.validate();
    if (!s.coupling) throw std::invalid_argument("attach_sensors: sensor coupling not set");
    dims.push_back(s.photons + 1 + extra_levels);
  }
  const HilbertSpace space(dims);

  const Operator sigma = liouville::embed(liouville::lowering_op(2), 0, space);
  Operator h = liouville::embed(fluorescence::emitter_hamiltonian(p).matrix, 0, space);
  std::vector<LindbladTerm> terms{{p.gamma, sigma}};
  std::vector<Operator> lowering;
  lowering.reserve(sensors.size());

  for (std::size_t i = 0; i < sensors.size(); ++i) {
    const SensorSpec& s = sensors[i];
    const Operator a = liouville::embed(liouville::lowering_op(dims[i + 1]), i + 1, space);
    const double eps = *s.coupling;
    h = h + s.frequency * (a.adjoint() * a);
    h = h + eps * (sigma * a.adjoint() + sigma.adjoint() * a);
    terms.push_back({s.linewidth, a});
    lowering.push_back(a);
  }

  return {liouville::build_liouvillian(h, terms), sigma, std::move(lowering)};
}

std::vector<double> filtered_spectrum(const EmitterParams& p, double linewidth,
                                      std::span<const double> omegas, double epsilon) {
  p.validate();
  if (!(linewidth > 0.0)) throw std::invalid_argument("filtered_spectrum: linewidth must be > 0");
  const double ceiling = std::min(p.gamma, linewidth) / 10.0;
  if (!(epsilon > 0.0) || epsilon > ceiling) {
    throw std::invalid_argument("filtered_spectrum: epsilon must lie in (0, min(gamma, Gamma)/10]");
  }
  const double scale = linewidth / (2.0 * std::numbers::pi * epsilon * epsilon);
  std::vector<double> out;
  out.reserve(omegas.size());
  for (const double w : omegas) {
    const SensorSpec sensor{w, linewidth, 1, epsilon};
    const auto sys = attach_sensors(p, std::span(&sensor, 1));
    const auto rho = liouville::steady_state(sys.liouvillian);
    const Operator& a = sys.sensors.front();
    out.push_back(scale * liouville::expectation(rho, a.adjoint() * a).real());
  }
  return out;
}

double epsilon_policy(const EmitterParams& p, std::span<const SensorSpec> sensors) {
  p.validate();
  if (sensors.empty() || sensors.size() > kMaxSensors) {
    throw UnsupportedSensorCount("epsilon_policy: unsupported sensor count");
  }
  double smallest = p.gamma;
  for (const SensorSpec& s : sensors) {
    s.validate();
    smallest = std::min(smallest, s.linewidth);
  }
  const double base = smallest / 100.0;
  const double ceiling = smallest / 10.0;

  // Single-photon pilot at the default coupling; bundle moments scale as eps^(2n).
  std::vector<SensorSpec> pilot(sensors.begin(), sensors.end());
  for (SensorSpec& s : pilot) {
    s.photons = 1;
    s.coupling = base;
  }
  const auto sys = attach_sensors(p, pilot);
  const auto rho = liouville::steady_state(sys.liouvillian);

  double eps = base;
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    const Operator& a = sys.sensors[i];
    const double p1 = liouville::expectation(rho, a.adjoint() * a).real();
    const int n = sensors[i].photons;
    if (!(p1 > 0.0)) {
      throw InfeasibleEpsilon("epsilon_policy: sensor " + std::to_string(i) +
                              " receives no light; no coupling yields a usable normalization");
    }
    const double estimate = std::pow(p1, n);
    if (estimate < kNormalizationFloor) {
      eps = std::max(eps, base * std::pow(kNormalizationFloor / estimate, 1.0 / (2.0 * n)));
    }
  }
  if (eps > ceiling) {
    std::ostringstream msg;
    msg << "epsilon_policy: normalization floor requires eps=" << eps
        << " above the weak-coupling ceiling " << ceiling;
    throw InfeasibleEpsilon(msg.str());
  }
  return eps;
}

namespace {

double resolve_epsilon(const EmitterParams& p, const SensorSpec& s1, const SensorSpec& s2) {
  if (s1.coupling && s2.coupling) {
    if (*s1.coupling != *s2.coupling) {
      throw std::invalid_argument("bundle correlators require equal sensor couplings");
    }
    return *s1.coupling;
  }
  if (s1.coupling || s2.coupling) return s1.coupling ? *s1.coupling : *s2.coupling;
  const std::array pair{s1, s2};
  return epsilon_policy(p, pair);
}

std::array<SensorSpec, 2> with_coupling(SensorSpec s1, SensorSpec s2, double eps) {
  s1.coupling = eps;
  s2.coupling = eps;
  return {s1, s2};
}

void check_denominator(double norm, int which, double eps) {
  if (!(norm >= kDenominatorFloor)) {
    std::ostringstream msg;
    msg << "sensor " << which << " normalization " << norm << " below " << kDenominatorFloor
        << " at eps=" << eps;
    throw DenominatorUnderflow(msg.str());
  }
}

double relative_change(double at_eps, double at_half) {
  const double diff = std::abs(at_eps - at_half);
  if (diff == 0.0) return 0.0;
  return diff / std::abs(at_half);
}

CorrelationResult combine(double at_eps, double at_half, double eps, double tol) {
  const double change = relative_change(at_eps, at_half);
  return {at_eps, eps, change, change < tol};
}

} // namespace

BundleMoments bundle_moments(const EmitterParams& p, const SensorSpec& s1, const SensorSpec& s2,
                             double epsilon, int extra_levels) {
  const auto sensors = with_coupling(s1, s2, epsilon);
  const auto sys = attach_sensors(p, sensors, extra_levels);
  const auto rho = liouville::steady_state(sys.liouvillian);
  const Operator a1 = sys.sensors[0].pow(s1.photons);
  const Operator a2 = sys.sensors[1].pow(s2.photons);
  const Operator n1 = a1.adjoint() * a1;
  const Operator n2 = a2.adjoint() * a2;
  return {liouville::expectation(rho, a1.adjoint() * n2 * a1).real(),
          liouville::expectation(rho, n1).real(), liouville::expectation(rho, n2).real()};
}

CorrelationResult bundle_g2_zero_delay(const EmitterParams& p, const SensorSpec& s1,
                                       const SensorSpec& s2, const SensingOptions& opts) {
  const double eps = resolve_epsilon(p, s1, s2);
  auto evaluate = [&](double e) {
    const BundleMoments m = bundle_moments(p, s1, s2, e, opts.extra_levels);
    check_denominator(m.norm1, 1, e);
    check_denominator(m.norm2, 2, e);
    return m.joint / (m.norm1 * m.norm2);
  };
  return combine(evaluate(eps), evaluate(0.5 * eps), eps, opts.convergence_tol);
}

std::vector<CorrelationResult> bundle_g2_tau(const EmitterParams& p, const SensorSpec& s1,
                                             const SensorSpec& s2, std::span<const double> taus,
                                             const SensingOptions& opts) {
  const double eps = resolve_epsilon(p, s1, s2);
  auto evaluate = [&](double e) {
    const auto sensors = with_coupling(s1, s2, e);
    const auto sys = attach_sensors(p, sensors, opts.extra_levels);
    const auto rho = liouville::steady_state(sys.liouvillian);
    const Operator a1 = sys.sensors[0].pow(s1.photons);
    const Operator a2 = sys.sensors[1].pow(s2.photons);
    const Operator n2 = a2.adjoint() * a2;
    const double norm1 = liouville::expectation(rho, a1.adjoint() * a1).real();
    const double norm2 = liouville::expectation(rho, n2).real();
    check_denominator(norm1, 1, e);
    check_denominator(norm2, 2, e);
    const auto corr =
        liouville::two_time_correlator(sys.liouvillian, rho, a1, n2, taus, opts.rel_tol);
    std::vector<double> values;
    values.reserve(corr.size());
    for (const auto& c : corr) values.push_back(c.real() / (norm1 * norm2));
    return values;
  };
  const auto at_eps = evaluate(eps);
  const auto at_half = evaluate(0.5 * eps);
  std::vector<CorrelationResult> out;
  out.reserve(taus.size());
  for (std::size_t k = 0; k < taus.size(); ++k) {
    out.push_back(combine(at_eps[k], at_half[k], eps, opts.convergence_tol));
  }
  return out;
}

} // namespace mollow::sensing
