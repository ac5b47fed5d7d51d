#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mollow/fluorescence.hpp"
#include "mollow/liouville.hpp"

namespace mollow::sensing {

using fluorescence::EmitterParams;
using liouville::Operator;

/// A weakly coupled filter mode. A sensor for n-photon bundles is a boson
/// truncated to n+1 levels.
struct SensorSpec {
  double frequency = 0.0;  ///< laser-relative centre
  double linewidth = 1.0;  ///< Gamma
  int photons = 1;         ///< bundle size n
  std::optional<double> coupling;  ///< epsilon; filled by epsilon_policy when empty

  void validate() const;
};

struct CorrelationResult {
  double value = 0.0;
  double epsilon_used = 0.0;
  double convergence = 0.0;  ///< |g(eps) - g(eps/2)| / |g(eps/2)|
  bool converged = false;
};

struct SensingOptions {
  double rel_tol = liouville::kDefaultRelTol;  ///< propagation tolerance
  double convergence_tol = 5e-3;               ///< epsilon-halving acceptance
  int extra_levels = 0;                        ///< truncation diagnostic: keep n+1+extra levels
};

inline constexpr double kDenominatorFloor = 1e-30;
inline constexpr double kNormalizationFloor = 1e-24;
inline constexpr std::size_t kMaxSensors = 2;

struct SensorSystem {
  liouville::Liouvillian liouvillian;
  Operator sigma;
  std::vector<Operator> sensors;  ///< lowering operator of each sensor
};

/// Emitter coupled to up to two sensors at their own epsilon:
/// H = H_emitter + sum w_i s_i^+ s_i + eps_i (sigma s_i^+ + sigma^+ s_i),
/// decay channels (gamma, sigma) and (Gamma_i, s_i).
SensorSystem attach_sensors(const EmitterParams& p, std::span<const SensorSpec> sensors,
                            int extra_levels = 0);

/// S(w) = Gamma / (2 pi eps^2) <s^+ s> with one single-photon sensor per grid point.
std::vector<double> filtered_spectrum(const EmitterParams& p, double linewidth,
                                      std::span<const double> omegas, double epsilon);

/// Default coupling: min(gamma, Gamma_i) / 100, raised when a bundle
/// normalization would fall below 1e-24 (estimated from a single-photon
/// pilot run) but never above the weak-coupling ceiling min(...) / 10.
double epsilon_policy(const EmitterParams& p, std::span<const SensorSpec> sensors);

/// Normalized zero-delay bundle correlator, re-evaluated at eps/2.
CorrelationResult bundle_g2_zero_delay(const EmitterParams& p, const SensorSpec& s1,
                                       const SensorSpec& s2, const SensingOptions& opts = {});

/// Normalized tau-resolved bundle correlator: s1 detects first, s2 at delay tau.
std::vector<CorrelationResult> bundle_g2_tau(const EmitterParams& p, const SensorSpec& s1,
                                             const SensorSpec& s2, std::span<const double> taus,
                                             const SensingOptions& opts = {});

/// Raw correlator pieces at one fixed epsilon (no halving). Exposed for
/// diagnostics and scaling checks.
struct BundleMoments {
  double joint = 0.0;  ///< <s1^+n1 s2^+n2 s2^n2 s1^n1>
  double norm1 = 0.0;  ///< <s1^+n1 s1^n1>
  double norm2 = 0.0;  ///< <s2^+n2 s2^n2>
};

BundleMoments bundle_moments(const EmitterParams& p, const SensorSpec& s1, const SensorSpec& s2,
                             double epsilon, int extra_levels = 0);

} // namespace mollow::sensing
