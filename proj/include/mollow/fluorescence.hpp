#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "mollow/liouville.hpp"

namespace mollow::fluorescence {

using liouville::complex;
using liouville::Operator;

/// Driven two-level emitter in the frame rotating at the laser frequency.
/// All rates and frequencies are in units of gamma.
struct EmitterParams {
  double gamma = 1.0;     ///< radiative decay rate
  double omega = 0.0;     ///< drive amplitude, H contains omega (sigma + sigma^+)
  double detuning = 0.0;  ///< emitter minus laser frequency

  void validate() const;
};

struct DressedQuantities {
  double splitting;     ///< Omega_+ = sqrt(detuning^2 + 4 omega^2)
  double mixing_angle;  ///< tan(2 theta) = 2 omega / detuning
};

/// Emitter basis: index 0 = ground, 1 = excited.
liouville::HilbertSpace emitter_space();
Operator emitter_lowering();

/// H = detuning sigma^+ sigma + omega (sigma + sigma^+).
Operator emitter_hamiltonian(const EmitterParams& p);

/// Bare-emitter Liouvillian with a single decay channel (gamma, sigma).
liouville::Liouvillian emitter_liouvillian(const EmitterParams& p);

DressedQuantities dressed_splitting(const EmitterParams& p);

/// Drive amplitude that produces a requested dressed splitting at a given
/// detuning. Requires splitting >= |detuning|.
double omega_for_splitting(double splitting, double detuning);

struct BlochSteadyState {
  double population;  ///< rho_ee
  complex coherence;  ///< <sigma> = rho_eg
};

/// Closed-form stationary optical Bloch solution (see docs/derivations.md).
BlochSteadyState bloch_steady_state(const EmitterParams& p);

/// g2(tau) = <sigma^+(0) sigma^+ sigma(tau) sigma(0)> / <sigma^+ sigma>^2 of the bare emitter.
std::vector<double> unfiltered_g2(const EmitterParams& p, std::span<const double> taus,
                                  double rel_tol = liouville::kDefaultRelTol);

/// Time ordering of the two sideband detections. `high_then_low` means the
/// +Omega_+ photon is detected first and the -Omega_+ photon a delay tau later.
enum class SidebandOrder { high_then_low, low_then_high };

std::string_view to_string(SidebandOrder order);
SidebandOrder sideband_order_from_string(std::string_view name);

/// Secular dressed-atom approximation of the filtered cross-correlation
/// between the two Mollow sidebands, including the Lorentzian filter
/// response. Independent of the exact sensor pipeline; see
/// docs/derivations.md for the closed form.
std::vector<double> schrama_sideband_g2(const EmitterParams& p, double filter_linewidth,
                                        SidebandOrder which, std::span<const double> taus);

} // namespace mollow::fluorescence
