#include "mollow/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <stdexcept>
#include <thread>

namespace mollow::sweep {

std::string_view to_string(Axis axis) {
  switch (axis) {
    case Axis::omega1: return "omega1";
    case Axis::omega2: return "omega2";
    case Axis::tau: return "tau";
  }
  return "?";
}

void GridSpec::validate() const {
  if (!std::isfinite(min) || !std::isfinite(max) || !(min < max)) {
    throw std::invalid_argument("grid: require finite min < max");
  }
  if (points < 2) throw std::invalid_argument("grid: require at least 2 points");
}

double GridSpec::value(int k) const {
  if (k == points - 1) return max;
  return min + k * (max - min) / (points - 1);
}

std::vector<double> GridSpec::values() const {
  validate();
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) out[static_cast<std::size_t>(k)] = value(k);
  return out;
}

std::vector<LeapfrogLine> leapfrog_lines(int n1, int n2, const DressedQuantities& dressed) {
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("leapfrog_lines: bundle sizes must be >= 1");
  // Initial and final dressed states of the (n1+n2)-photon jump are each |+> or |->,
  // so the total emitted energy differs from (n1+n2) laser photons by E_i - E_f.
  const double s = dressed.splitting;
  if (s == 0.0) return {{n1, n2, 0.0}};
  return {{n1, n2, -s}, {n1, n2, 0.0}, {n1, n2, s}};
}

std::vector<double> LandscapeResult::values() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.value);
  return out;
}

double LandscapeResult::unconverged_fraction() const {
  if (points.empty()) return 0.0;
  const auto bad = std::count_if(points.begin(), points.end(), [](const auto& p) { return !p.converged; });
  return static_cast<double>(bad) / static_cast<double>(points.size());
}

const CorrelationResult& LandscapeResult::at(int i, int j) const {
  const int inner = axes.size() > 1 ? axes[1].points : 1;
  return points.at(static_cast<std::size_t>(i) * inner + j);
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& task,
                  const ProgressFn& progress) {
  if (count == 0) return;
  const std::size_t n_workers = std::min<std::size_t>(resolve_workers(workers), count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> done{0};

  auto run_block = [&](std::size_t w) {
    const std::size_t begin = count * w / n_workers;
    const std::size_t end = count * (w + 1) / n_workers;
    for (std::size_t i = begin; i < end; ++i) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
      const std::size_t finished = ++done;
      if (progress) progress(finished, count);
    }
  };

  if (n_workers == 1) {
    run_block(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(run_block, w);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

LandscapeResult run_tau_trace(const TauTraceScenario& scenario, const SweepOptions& opts) {
  scenario.tau.validate();
  if (scenario.tau.min < 0.0) throw std::invalid_argument("run_tau_trace: tau grid must be >= 0");
  if (scenario.both_orderings && scenario.tau.min != 0.0) {
    throw std::invalid_argument("run_tau_trace: both orderings need a tau grid starting at 0");
  }
  const auto taus = scenario.tau.values();

  std::vector<CorrelationResult> forward, backward;
  parallel_for(scenario.both_orderings ? 2 : 1, opts.workers, [&](std::size_t which) {
    if (which == 0) {
      forward = sensing::bundle_g2_tau(scenario.emitter, scenario.first, scenario.second, taus,
                                       opts.sensing);
    } else {
      // g(w1, w2, -tau) = g(w2, w1, tau)
      backward = sensing::bundle_g2_tau(scenario.emitter, scenario.second, scenario.first, taus,
                                        opts.sensing);
    }
  }, opts.progress);

  LandscapeResult result;
  result.emitter = scenario.emitter;
  result.sensors = {scenario.first, scenario.second};
  if (!scenario.both_orderings) {
    result.axes = {scenario.tau};
    result.points = std::move(forward);
    return result;
  }
  const int p = scenario.tau.points;
  result.axes = {GridSpec{Axis::tau, -scenario.tau.max, scenario.tau.max, 2 * p - 1}};
  result.points.reserve(static_cast<std::size_t>(2 * p - 1));
  for (int k = p - 1; k >= 1; --k) result.points.push_back(backward[static_cast<std::size_t>(k)]);
  result.points.insert(result.points.end(), forward.begin(), forward.end());
  return result;
}

LandscapeResult run_frequency_landscape(const LandscapeScenario& scenario, const SweepOptions& opts) {
  const auto w1 = scenario.omega1.values();
  const auto w2 = scenario.omega2.values();
  const std::size_t n2 = w2.size();

  LandscapeResult result;
  result.emitter = scenario.emitter;
  result.sensors = {scenario.first, scenario.second};
  result.axes = {scenario.omega1, scenario.omega2};
  result.axes[0].axis = Axis::omega1;
  result.axes[1].axis = Axis::omega2;
  result.points.resize(w1.size() * n2);
  result.annotations = leapfrog_lines(scenario.first.photons, scenario.second.photons,
                                      fluorescence::dressed_splitting(scenario.emitter));

  parallel_for(result.points.size(), opts.workers, [&](std::size_t idx) {
    SensorSpec s1 = scenario.first;
    SensorSpec s2 = scenario.second;
    s1.frequency = w1[idx / n2];
    s2.frequency = w2[idx % n2];
    result.points[idx] = sensing::bundle_g2_zero_delay(scenario.emitter, s1, s2, opts.sensing);
  }, opts.progress);
  return result;
}

LandscapeResult run_time_frequency_map(const TimeFrequencyScenario& scenario,
                                       const SweepOptions& opts) {
  const auto w1 = scenario.omega1.values();
  const auto taus = scenario.tau.values();
  if (scenario.tau.min < 0.0) throw std::invalid_argument("run_time_frequency_map: tau grid must be >= 0");
  const std::size_t nt = taus.size();

  LandscapeResult result;
  result.emitter = scenario.emitter;
  result.sensors = {scenario.first, scenario.second};
  result.axes = {scenario.omega1, scenario.tau};
  result.axes[0].axis = Axis::omega1;
  result.axes[1].axis = Axis::tau;
  result.points.resize(w1.size() * nt);
  result.annotations = leapfrog_lines(scenario.first.photons, scenario.second.photons,
                                      fluorescence::dressed_splitting(scenario.emitter));

  parallel_for(w1.size(), opts.workers, [&](std::size_t i) {
    SensorSpec s1 = scenario.first;
    s1.frequency = w1[i];
    const auto row = sensing::bundle_g2_tau(scenario.emitter, s1, scenario.second, taus, opts.sensing);
    std::copy(row.begin(), row.end(), result.points.begin() + static_cast<std::ptrdiff_t>(i * nt));
  }, opts.progress);
  return result;
}

} // namespace mollow::sweep
