#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mollow/fluorescence.hpp"
#include "mollow/sensing.hpp"

namespace mollow::sweep {

using fluorescence::DressedQuantities;
using fluorescence::EmitterParams;
using sensing::CorrelationResult;
using sensing::SensorSpec;

enum class Axis { omega1, omega2, tau };

std::string_view to_string(Axis axis);

/// Uniform grid including both endpoints.
struct GridSpec {
  Axis axis = Axis::tau;
  double min = 0.0;
  double max = 1.0;
  int points = 2;

  void validate() const;
  double value(int k) const;
  std::vector<double> values() const;
};

/// n1 w1 + n2 w2 = offset.
struct LeapfrogLine {
  int n1 = 1;
  int n2 = 1;
  double offset = 0.0;
};

/// Energy-conservation lines of (n1 + n2)-photon transitions that jump
/// across the dressed ladder: offsets {-Omega_+, 0, +Omega_+}.
std::vector<LeapfrogLine> leapfrog_lines(int n1, int n2, const DressedQuantities& dressed);

struct LandscapeResult {
  std::vector<GridSpec> axes;      ///< one or two axes; the last one varies fastest
  EmitterParams emitter;
  std::vector<SensorSpec> sensors; ///< sensor templates; swept frequencies are ignored
  std::vector<CorrelationResult> points;
  std::vector<LeapfrogLine> annotations;

  std::vector<double> values() const;
  /// Fraction of points whose epsilon-halving check failed.
  double unconverged_fraction() const;
  const CorrelationResult& at(int i, int j) const;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

struct SweepOptions {
  unsigned workers = 0;  ///< 0 selects std::thread::hardware_concurrency()
  sensing::SensingOptions sensing;
  ProgressFn progress;   ///< optional; may be called from worker threads
};

unsigned resolve_workers(unsigned requested);

struct TauTraceScenario {
  EmitterParams emitter;
  SensorSpec first;   ///< detected at time 0
  SensorSpec second;  ///< detected at delay tau
  GridSpec tau;
  bool both_orderings = false;  ///< prepend negative delays from the swapped correlator
};

struct LandscapeScenario {
  EmitterParams emitter;
  SensorSpec first;   ///< photons, linewidth and optional coupling; frequency swept
  SensorSpec second;
  GridSpec omega1;
  GridSpec omega2;
};

struct TimeFrequencyScenario {
  EmitterParams emitter;
  SensorSpec first;   ///< frequency swept along omega1
  SensorSpec second;  ///< fixed frequency
  GridSpec omega1;
  GridSpec tau;
};

LandscapeResult run_tau_trace(const TauTraceScenario& scenario, const SweepOptions& opts = {});
LandscapeResult run_frequency_landscape(const LandscapeScenario& scenario,
                                        const SweepOptions& opts = {});
LandscapeResult run_time_frequency_map(const TimeFrequencyScenario& scenario,
                                       const SweepOptions& opts = {});

/// Runs task(i) for i in [0, count) on a static block partition of workers.
/// Results land in pre-assigned slots; the first exception by index is rethrown.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& task,
                  const ProgressFn& progress = {});

} // namespace mollow::sweep
