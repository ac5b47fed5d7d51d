#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mollow/fluorescence.hpp"
#include "mollow/sweep.hpp"

using namespace mollow;
using namespace mollow::sweep;

namespace {

const EmitterParams kDetuned{1.0, fluorescence::omega_for_splitting(300.0, 200.0), 200.0};

bool same_bits(const LandscapeResult& a, const LandscapeResult& b) {
  if (a.points.size() != b.points.size()) return false;
  for (std::size_t k = 0; k < a.points.size(); ++k) {
    const auto& x = a.points[k];
    const auto& y = b.points[k];
    if (x.value != y.value || x.convergence != y.convergence || x.epsilon_used != y.epsilon_used ||
        x.converged != y.converged) {
      return false;
    }
  }
  return true;
}

} // namespace

TEST_SUITE("sweep") {

TEST_CASE("grid values include both endpoints") {
  const GridSpec g{Axis::omega1, -400.0, 400.0, 101};
  const auto v = g.values();
  REQUIRE(v.size() == 101);
  CHECK(v.front() == -400.0);
  CHECK(v.back() == 400.0);
  CHECK(v[50] == 0.0);
  CHECK(v[1] == -392.0);
  CHECK_THROWS_AS((GridSpec{Axis::tau, 1.0, 1.0, 3}.values()), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{Axis::tau, 0.0, 1.0, 1}.values()), std::invalid_argument);
}

TEST_CASE("leapfrog lines") {
  const auto dressed = fluorescence::dressed_splitting(kDetuned);
  const auto single = leapfrog_lines(1, 1, dressed);
  REQUIRE(single.size() == 3);
  CHECK(single[0].offset == doctest::Approx(-300.0));
  CHECK(single[1].offset == 0.0);
  CHECK(single[2].offset == doctest::Approx(300.0));
  for (const auto& l : single) CHECK((l.n1 == 1 && l.n2 == 1));

  const auto bundles = leapfrog_lines(2, 2, dressed);
  REQUIRE(bundles.size() == 3);
  for (const auto& l : bundles) CHECK((l.n1 == 2 && l.n2 == 2));
  CHECK(bundles[2].offset == doctest::Approx(300.0));

  const auto degenerate = leapfrog_lines(1, 2, fluorescence::dressed_splitting({1.0, 0.0, 0.0}));
  REQUIRE(degenerate.size() == 1);
  CHECK(degenerate[0].offset == 0.0);
}

TEST_CASE("dressed-ladder energies give the leapfrog offsets") {
  // Two photons leave |i> of manifold N+1 for |f> of manifold N-1; with
  // laser-relative frequencies the photon energies add up to E_i - E_f.
  const auto dressed = fluorescence::dressed_splitting(kDetuned);
  const double e_plus = dressed.splitting / 2.0, e_minus = -dressed.splitting / 2.0;
  std::vector<double> offsets;
  for (double ei : {e_minus, e_plus})
    for (double ef : {e_minus, e_plus}) offsets.push_back(ei - ef);
  for (double o : offsets) {
    bool found = false;
    for (const auto& l : leapfrog_lines(1, 1, dressed)) found = found || std::abs(l.offset - o) < 1e-12;
    CHECK(found);
  }
}

TEST_CASE("parallel_for covers every index once and reports progress") {
  std::vector<int> hits(103, 0);
  std::atomic<std::size_t> last{0};
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; },
               [&](std::size_t done, std::size_t total) {
                 CHECK(total == 103);
                 last = std::max<std::size_t>(last, done);
               });
  for (int h : hits) CHECK(h == 1);
  CHECK(last == 103);
}

TEST_CASE("parallel_for rethrows the lowest failing index") {
  auto task = [](std::size_t i) {
    if (i == 17 || i == 60) throw std::runtime_error("fail " + std::to_string(i));
  };
  for (unsigned workers : {1u, 3u, 8u}) {
    try {
      parallel_for(80, workers, task);
      FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "fail 17");
    }
  }
}

TEST_CASE("landscape is swap symmetric and independent of the worker count") {
  const LandscapeScenario sc{kDetuned, {0.0, 5.0, 1, {}}, {0.0, 5.0, 1, {}},
                             {Axis::omega1, -400.0, 400.0, 11}, {Axis::omega2, -400.0, 400.0, 11}};
  SweepOptions serial;
  serial.workers = 1;
  SweepOptions parallel;
  parallel.workers = 4;
  const auto a = run_frequency_landscape(sc, serial);
  const auto b = run_frequency_landscape(sc, parallel);
  CHECK(same_bits(a, b));
  CHECK(a.unconverged_fraction() == 0.0);
  REQUIRE(a.annotations.size() == 3);
  for (int i = 0; i < 11; ++i) {
    for (int j = 0; j < 11; ++j) {
      const double x = a.at(i, j).value, y = a.at(j, i).value;
      CHECK(std::abs(x - y) <= 1e-8 * std::max(1.0, std::abs(x)));
      CHECK(x >= 0.0);
    }
  }
}

TEST_CASE("bunching on the central leapfrog line away from the peaks") {
  const LandscapeScenario sc{kDetuned, {0.0, 5.0, 1, {}}, {0.0, 5.0, 1, {}},
                             {Axis::omega1, -100.0, 100.0, 3}, {Axis::omega2, -100.0, 100.0, 3}};
  const auto r = run_frequency_landscape(sc);
  // (-100, 100) and (100, -100) lie on w1 + w2 = 0, at least 100 from every peak.
  CHECK(r.at(0, 2).value > 1.0);
  CHECK(r.at(2, 0).value > 1.0);
}

TEST_CASE("tau trace consistency and both orderings") {
  const EmitterParams resonant{1.0, 150.0, 0.0};
  const TauTraceScenario sc{resonant, {300.0, 40.0, 1, {}}, {-300.0, 40.0, 1, {}},
                            {Axis::tau, 0.0, 2.0, 3}, false};
  const auto r = run_tau_trace(sc);
  REQUIRE(r.points.size() == 3);
  const auto zero = sensing::bundle_g2_zero_delay(resonant, sc.first, sc.second);
  CHECK(std::abs(r.points[0].value - zero.value) <= 1e-9 * zero.value);

  TauTraceScenario both = sc;
  both.both_orderings = true;
  const auto b = run_tau_trace(both);
  REQUIRE(b.points.size() == 5);
  CHECK(b.axes[0].min == -2.0);
  CHECK(b.points[2].value == r.points[0].value);
  CHECK(b.points[3].value == r.points[1].value);
  const auto swapped = sensing::bundle_g2_tau(resonant, sc.second, sc.first, sc.tau.values());
  CHECK(b.points[0].value == swapped[2].value);

  TauTraceScenario bad = both;
  bad.tau.min = 0.5;
  CHECK_THROWS_AS(run_tau_trace(bad), std::invalid_argument);
}

TEST_CASE("heralding trace relaxes to one") {
  const EmitterParams resonant{1.0, 150.0, 0.0};
  const TauTraceScenario sc{resonant, {-300.0, 40.0, 1, {}}, {300.0, 40.0, 1, {}},
                            {Axis::tau, 0.0, 50.0, 251}, false};
  const auto r = run_tau_trace(sc);
  double peak = 0.0;
  for (const auto& p : r.points) peak = std::max(peak, p.value);
  CHECK(peak > 1.0);
  CHECK(std::abs(r.points.back().value - 1.0) <= 1e-3);
  CHECK(r.unconverged_fraction() == 0.0);
}

TEST_CASE("time-frequency map agrees with the landscape at zero delay") {
  const EmitterParams p{1.0, 87.0, 0.0};
  const GridSpec w1{Axis::omega1, -300.0, 300.0, 7};
  const TimeFrequencyScenario tf{p, {0.0, 5.0, 1, {}}, {87.0, 5.0, 1, {}}, w1, {Axis::tau, 0.0, 50.0, 11}};
  const auto map = run_time_frequency_map(tf);
  const LandscapeScenario ls{p, {0.0, 5.0, 1, {}}, {0.0, 5.0, 1, {}}, w1, {Axis::omega2, 86.0, 88.0, 3}};
  const auto land = run_frequency_landscape(ls);
  for (int i = 0; i < 7; ++i) {
    CHECK(std::abs(map.at(i, 0).value - land.at(i, 1).value) <= 1e-9 * std::max(1.0, land.at(i, 1).value));
    CHECK(std::abs(map.at(i, 10).value - 1.0) <= 1e-3);
  }
}

} // TEST_SUITE
