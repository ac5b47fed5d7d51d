// mollow: command-line front end for frequency-resolved correlations of resonance fluorescence.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <mutex>

#include <CLI11.hpp>

#include "mollow/errors.hpp"
#include "mollow/io.hpp"

namespace {

using namespace mollow;

struct Counter {
  std::mutex mutex;
  std::size_t last_percent = 101;

  void report(std::size_t done, std::size_t total) {
    const std::size_t percent = total ? done * 10 / total * 10 : 100;
    std::lock_guard lock(mutex);
    if (percent == last_percent) return;
    last_percent = percent;
    std::fprintf(stderr, "\r  %zu/%zu points (%zu%%)", done, total, percent);
    if (done == total) std::fputc('\n', stderr);
    std::fflush(stderr);
  }
};

int run(std::string_view subcommand, const std::string& config_path, unsigned workers,
        bool allow_unconverged, bool emit_plot) {
  io::ScenarioConfig cfg = io::load_config(config_path);
  if (io::to_string(cfg.task) != subcommand) {
    throw ValidationError("task.type: config describes '" + std::string(io::to_string(cfg.task)) +
                          "' but subcommand is '" + std::string(subcommand) + "'");
  }
  if (workers > 0) cfg.workers = workers;

  Counter counter;
  sweep::SweepOptions opts;
  opts.workers = cfg.workers;
  opts.progress = [&counter](std::size_t done, std::size_t total) { counter.report(done, total); };

  const auto start = std::chrono::steady_clock::now();
  const io::TaskOutput out = io::run_task(cfg, opts);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::filesystem::path csv = cfg.output + ".csv";
  io::emit_csv(out.table, csv);
  std::fprintf(stderr, "wrote %s (%zu rows, %.1f s, %u workers)\n", csv.string().c_str(),
               out.table.rows.size(), seconds, cfg.workers);
  if (emit_plot) {
    const std::filesystem::path script = cfg.output + ".py";
    io::emit_plot_script(out, csv, script);
    std::fprintf(stderr, "wrote %s\n", script.string().c_str());
  }

  if (!out.all_converged) {
    const auto frac = out.table.meta("convergence.unconverged_fraction").value_or("?");
    std::fprintf(stderr, "%s: unconverged fraction %s (epsilon halving exceeded tolerance)\n",
                 allow_unconverged ? "warning" : "error", frac.c_str());
    return allow_unconverged ? 0 : 3;
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequency- and time-resolved photon and bundle correlations of resonance fluorescence"};
  app.set_version_flag("--version", std::string(mollow::io::kToolVersion));
  app.require_subcommand(1);

  std::string config;
  unsigned workers = 0;
  bool allow_unconverged = false;
  bool emit_plot = false;

  const std::pair<const char*, const char*> commands[] = {
      {"spectrum", "filtered emission spectrum"},
      {"g2tau", "delay-resolved cross-correlation of two sensors"},
      {"landscape", "zero-delay two-photon spectrum over (omega1, omega2)"},
      {"timefreq", "correlation map over (omega1, tau) at fixed omega2"},
      {"compare-approx", "exact sideband correlation against the dressed-state approximation"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "JSON scenario file")->required()->check(CLI::ExistingFile);
    sub->add_option("--workers", workers, "worker threads (default: available parallelism)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--allow-unconverged", allow_unconverged, "exit 0 even if some points did not converge");
    sub->add_flag("--emit-plot", emit_plot, "also write a matplotlib script next to the CSV");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    return run(app.get_subcommands().front()->get_name(), config, workers, allow_unconverged, emit_plot);
  } catch (const mollow::SchemaError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const mollow::ValidationError& e) {
    std::fprintf(stderr, "invalid config: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
