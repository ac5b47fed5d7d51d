#include "mollow/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mollow/errors.hpp"

namespace mollow::io {

using nlohmann::json;
using sweep::Axis;
using sweep::GridSpec;

std::string_view to_string(TaskType task) {
  switch (task) {
    case TaskType::spectrum: return "spectrum";
    case TaskType::g2tau: return "g2tau";
    case TaskType::landscape: return "landscape";
    case TaskType::timefreq: return "timefreq";
    case TaskType::compare_approx: return "compare-approx";
  }
  return "?";
}

std::optional<TaskType> task_from_string(std::string_view name) {
  for (TaskType t : {TaskType::spectrum, TaskType::g2tau, TaskType::landscape, TaskType::timefreq,
                     TaskType::compare_approx}) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- config ---

namespace {

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path + ": expected an object");
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw SchemaError(join(path, item.key()) + ": unknown field");
    }
  }
}

const json* find(const json& j, std::string_view key) {
  const auto it = j.find(std::string(key));
  if (it == j.end() || it->is_null()) return nullptr;
  return &*it;
}

const json& require(const json& j, std::string_view key, const std::string& path) {
  const json* v = find(j, key);
  if (!v) throw SchemaError(join(path, key) + ": required field missing");
  return *v;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ValidationError(path + ": must be finite");
  return v;
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path + ": expected an integer");
  return j.get<int>();
}

std::optional<double> optional_number(const json& j, std::string_view key, const std::string& path) {
  const json* v = find(j, key);
  if (!v) return std::nullopt;
  return as_number(*v, join(path, key));
}

GridSpec parse_grid(const json& j, Axis axis, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, path, {"min", "max", "points"});
  GridSpec g{axis, as_number(require(j, "min", path), path + ".min"),
             as_number(require(j, "max", path), path + ".max"),
             as_int(require(j, "points", path), path + ".points")};
  if (!(g.min < g.max)) throw ValidationError(path + ": min must be < max");
  if (g.points < 2) throw ValidationError(path + ".points: must be >= 2");
  if (axis == Axis::tau && g.min < 0.0) throw ValidationError(path + ".min: delays must be >= 0");
  return g;
}

struct SensorPresence {
  bool frequency = false;
};

sensing::SensorSpec parse_sensor(const json& j, const std::string& path, SensorPresence& seen) {
  require_object(j, path);
  reject_unknown(j, path, {"frequency", "linewidth", "photons", "coupling"});
  sensing::SensorSpec s;
  if (auto f = optional_number(j, "frequency", path)) {
    s.frequency = *f;
    seen.frequency = true;
  }
  s.linewidth = as_number(require(j, "linewidth", path), path + ".linewidth");
  if (!(s.linewidth > 0.0)) throw ValidationError(path + ".linewidth: must be > 0");
  if (const json* n = find(j, "photons")) s.photons = as_int(*n, path + ".photons");
  if (s.photons < 1) throw ValidationError(path + ".photons: must be >= 1");
  s.coupling = optional_number(j, "coupling", path);
  if (s.coupling && !(*s.coupling > 0.0)) throw ValidationError(path + ".coupling: must be > 0");
  return s;
}

} // namespace

ScenarioConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("<document>: invalid JSON: ") + e.what());
  }
  require_object(root, "<document>");
  reject_unknown(root, "", {"emitter", "sensors", "epsilon", "task", "output", "workers"});

  ScenarioConfig cfg;

  const json& em = require(root, "emitter", "");
  require_object(em, "emitter");
  reject_unknown(em, "emitter", {"gamma", "omega", "detuning"});
  if (auto g = optional_number(em, "gamma", "emitter")) cfg.emitter.gamma = *g;
  cfg.emitter.omega = as_number(require(em, "omega", "emitter"), "emitter.omega");
  if (auto d = optional_number(em, "detuning", "emitter")) cfg.emitter.detuning = *d;
  if (!(cfg.emitter.gamma > 0.0)) throw ValidationError("emitter.gamma: must be > 0");
  if (cfg.emitter.omega < 0.0) throw ValidationError("emitter.omega: must be >= 0");

  const json& sensors = require(root, "sensors", "");
  if (!sensors.is_array()) throw SchemaError("sensors: expected an array");
  if (sensors.empty() || sensors.size() > sensing::kMaxSensors) {
    throw ValidationError("sensors: between 1 and 2 sensors are supported");
  }
  std::vector<SensorPresence> seen(sensors.size());
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    cfg.sensors.push_back(parse_sensor(sensors[i], "sensors[" + std::to_string(i) + "]", seen[i]));
  }

  cfg.epsilon = optional_number(root, "epsilon", "");
  if (cfg.epsilon) {
    if (!(*cfg.epsilon > 0.0)) throw ValidationError("epsilon: must be > 0");
    for (auto& s : cfg.sensors) s.coupling = *cfg.epsilon;
  }

  const json& task = require(root, "task", "");
  require_object(task, "task");
  const json& type = require(task, "type", "task");
  if (!type.is_string()) throw SchemaError("task.type: expected a string");
  const auto task_type = task_from_string(type.get<std::string>());
  if (!task_type) throw ValidationError("task.type: unknown task '" + type.get<std::string>() + "'");
  cfg.task = *task_type;

  auto need_sensors = [&](std::size_t n) {
    if (cfg.sensors.size() != n) {
      throw ValidationError("sensors: task '" + std::string(to_string(cfg.task)) + "' needs " +
                            std::to_string(n) + " sensor(s)");
    }
  };
  auto need_frequency = [&](std::size_t i) {
    if (!seen[i].frequency) {
      throw SchemaError("sensors[" + std::to_string(i) + "].frequency: required field missing");
    }
  };

  switch (cfg.task) {
    case TaskType::spectrum:
      reject_unknown(task, "task", {"type", "omega"});
      cfg.omega = parse_grid(require(task, "omega", "task"), Axis::omega1, "task.omega");
      break;
    case TaskType::g2tau:
      reject_unknown(task, "task", {"type", "tau", "both_orderings"});
      need_sensors(2);
      need_frequency(0);
      need_frequency(1);
      cfg.tau = parse_grid(require(task, "tau", "task"), Axis::tau, "task.tau");
      if (const json* b = find(task, "both_orderings")) {
        if (!b->is_boolean()) throw SchemaError("task.both_orderings: expected a boolean");
        cfg.both_orderings = b->get<bool>();
        if (cfg.both_orderings && cfg.tau->min != 0.0) {
          throw ValidationError("task.tau.min: both_orderings needs a grid starting at 0");
        }
      }
      break;
    case TaskType::landscape:
      reject_unknown(task, "task", {"type", "omega1", "omega2"});
      need_sensors(2);
      cfg.omega1 = parse_grid(require(task, "omega1", "task"), Axis::omega1, "task.omega1");
      cfg.omega2 = parse_grid(require(task, "omega2", "task"), Axis::omega2, "task.omega2");
      break;
    case TaskType::timefreq:
      reject_unknown(task, "task", {"type", "omega1", "omega2", "tau"});
      need_sensors(2);
      cfg.omega1 = parse_grid(require(task, "omega1", "task"), Axis::omega1, "task.omega1");
      cfg.tau = parse_grid(require(task, "tau", "task"), Axis::tau, "task.tau");
      if (auto w2 = optional_number(task, "omega2", "task")) {
        cfg.sensors[1].frequency = *w2;
      } else {
        need_frequency(1);
      }
      break;
    case TaskType::compare_approx:
      reject_unknown(task, "task", {"type", "tau", "order"});
      cfg.tau = parse_grid(require(task, "tau", "task"), Axis::tau, "task.tau");
      if (const json* o = find(task, "order")) {
        if (!o->is_string()) throw SchemaError("task.order: expected a string");
        try {
          cfg.order = fluorescence::sideband_order_from_string(o->get<std::string>());
        } catch (const std::invalid_argument&) {
          throw ValidationError("task.order: expected 'high_then_low' or 'low_then_high'");
        }
      }
      if (!(cfg.emitter.omega > 0.0)) throw ValidationError("emitter.omega: compare-approx needs a driven emitter");
      break;
  }

  const json& out = require(root, "output", "");
  if (!out.is_string()) throw SchemaError("output: expected a string");
  cfg.output = out.get<std::string>();
  if (cfg.output.empty()) throw ValidationError("output: must not be empty");

  if (const json* w = find(root, "workers")) {
    const int n = as_int(*w, "workers");
    if (n < 1) throw ValidationError("workers: must be >= 1");
    cfg.workers = static_cast<unsigned>(n);
  } else {
    cfg.workers = sweep::resolve_workers(0);
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

// ------------------------------------------------------------------- csv ---

std::optional<std::string> ResultTable::meta(std::string_view key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_csv(const ResultTable& table) {
  std::string out;
  for (const auto& [k, v] : table.metadata) {
    if (k.find('=') != std::string::npos || k.find('\n') != std::string::npos ||
        v.find('\n') != std::string::npos) {
      throw std::invalid_argument("format_csv: metadata key/value contains a reserved character");
    }
    out += "# " + k + "=" + v + "\n";
  }
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw std::invalid_argument("format_csv: ragged table");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!std::isfinite(row[c])) throw std::invalid_argument("format_csv: non-finite value");
      if (c) out += ',';
      out += format_number(row[c]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    parts.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error("csv: cannot parse number '" + std::string(s) + "'");
  }
  return v;
}

} // namespace

ResultTable parse_csv(std::string_view text) {
  ResultTable table;
  bool have_header = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::string_view body = line.substr(1);
      if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      const std::size_t eq = body.find('=');
      if (eq == std::string_view::npos) throw Error("csv: metadata line without '='");
      table.metadata.emplace_back(std::string(body.substr(0, eq)), std::string(body.substr(eq + 1)));
    } else if (!have_header) {
      for (auto c : split(line, ',')) table.columns.emplace_back(c);
      have_header = true;
    } else {
      std::vector<double> row;
      for (auto c : split(line, ',')) row.push_back(parse_double(c));
      if (row.size() != table.columns.size()) throw Error("csv: ragged row");
      table.rows.push_back(std::move(row));
    }
  }
  if (!have_header) throw Error("csv: missing column header");
  return table;
}

void emit_csv(const ResultTable& table, const std::filesystem::path& path) {
  const std::string text = format_csv(table);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

ResultTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

// ------------------------------------------------------------- run task ---

namespace {

using Meta = std::vector<std::pair<std::string, std::string>>;

std::string describe_grid(const GridSpec& g) {
  return format_number(g.min) + ":" + format_number(g.max) + ":" + std::to_string(g.points);
}

Meta base_metadata(const ScenarioConfig& cfg) {
  Meta m{{"tool", std::string(kToolName)},
         {"version", std::string(kToolVersion)},
         {"units", std::string(kUnits)},
         {"task", std::string(to_string(cfg.task))},
         {"emitter.gamma", format_number(cfg.emitter.gamma)},
         {"emitter.omega", format_number(cfg.emitter.omega)},
         {"emitter.detuning", format_number(cfg.emitter.detuning)},
         {"dressed.splitting", format_number(fluorescence::dressed_splitting(cfg.emitter).splitting)}};
  for (std::size_t i = 0; i < cfg.sensors.size(); ++i) {
    const auto& s = cfg.sensors[i];
    const std::string p = "sensors[" + std::to_string(i) + "].";
    m.emplace_back(p + "frequency", format_number(s.frequency));
    m.emplace_back(p + "linewidth", format_number(s.linewidth));
    m.emplace_back(p + "photons", std::to_string(s.photons));
  }
  m.emplace_back("epsilon", cfg.epsilon ? format_number(*cfg.epsilon) : "auto");
  if (cfg.omega) m.emplace_back("grid.omega", describe_grid(*cfg.omega));
  if (cfg.omega1) m.emplace_back("grid.omega1", describe_grid(*cfg.omega1));
  if (cfg.omega2) m.emplace_back("grid.omega2", describe_grid(*cfg.omega2));
  if (cfg.tau) m.emplace_back("grid.tau", describe_grid(*cfg.tau));
  return m;
}

void convergence_metadata(Meta& m, const std::vector<sensing::CorrelationResult>& points,
                          double tol) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0, worst = 0.0;
  std::size_t bad = 0;
  for (const auto& p : points) {
    lo = std::min(lo, p.epsilon_used);
    hi = std::max(hi, p.epsilon_used);
    worst = std::max(worst, p.convergence);
    if (!p.converged) ++bad;
  }
  m.emplace_back("epsilon_used", lo == hi ? format_number(lo) : format_number(lo) + ".." + format_number(hi));
  m.emplace_back("epsilon_used.min", format_number(lo));
  m.emplace_back("epsilon_used.max", format_number(hi));
  m.emplace_back("convergence.tolerance", format_number(tol));
  m.emplace_back("convergence.worst", format_number(worst));
  m.emplace_back("convergence.unconverged_points", std::to_string(bad));
  m.emplace_back("convergence.unconverged_fraction",
                 format_number(points.empty() ? 0.0 : static_cast<double>(bad) / points.size()));
  m.emplace_back("converged", bad == 0 ? "true" : "false");
}

std::string describe_lines(const std::vector<sweep::LeapfrogLine>& lines) {
  std::string out;
  for (const auto& l : lines) {
    if (!out.empty()) out += ";";
    out += std::to_string(l.n1) + "*omega1+" + std::to_string(l.n2) + "*omega2=" + format_number(l.offset);
  }
  return out;
}

std::vector<double> point_row(std::initializer_list<double> head, const sensing::CorrelationResult& r) {
  std::vector<double> row(head);
  row.push_back(r.value);
  row.push_back(r.epsilon_used);
  row.push_back(r.converged ? 1.0 : 0.0);
  return row;
}

} // namespace

TaskOutput run_task(const ScenarioConfig& cfg, const sweep::SweepOptions& opts) {
  TaskOutput out;
  out.table.metadata = base_metadata(cfg);
  const double tol = opts.sensing.convergence_tol;

  switch (cfg.task) {
    case TaskType::spectrum: {
      const double linewidth = cfg.sensors[0].linewidth;
      const double eps = cfg.epsilon.value_or(
          cfg.sensors[0].coupling.value_or(std::min(cfg.emitter.gamma, linewidth) / 100.0));
      const auto omegas = cfg.omega->values();
      std::vector<double> intensity(omegas.size());
      sweep::parallel_for(omegas.size(), opts.workers, [&](std::size_t i) {
        intensity[i] = sensing::filtered_spectrum(cfg.emitter, linewidth, std::span(&omegas[i], 1), eps)[0];
      }, opts.progress);
      out.kind = PlotKind::spectrum;
      out.table.metadata.emplace_back("epsilon_used", format_number(eps));
      out.table.columns = {"omega", "intensity"};
      for (std::size_t i = 0; i < omegas.size(); ++i) out.table.rows.push_back({omegas[i], intensity[i]});
      break;
    }
    case TaskType::g2tau: {
      const sweep::TauTraceScenario sc{cfg.emitter, cfg.sensors[0], cfg.sensors[1], *cfg.tau,
                                       cfg.both_orderings};
      const auto result = sweep::run_tau_trace(sc, opts);
      // Mirror the configured grid exactly rather than re-deriving it from the symmetric axis.
      const auto forward = cfg.tau->values();
      std::vector<double> taus;
      if (cfg.both_orderings) {
        for (std::size_t k = forward.size() - 1; k >= 1; --k) taus.push_back(-forward[k]);
      }
      taus.insert(taus.end(), forward.begin(), forward.end());
      out.kind = PlotKind::trace;
      out.table.metadata.emplace_back("both_orderings", cfg.both_orderings ? "true" : "false");
      convergence_metadata(out.table.metadata, result.points, tol);
      out.table.columns = {"tau", "g2", "epsilon", "converged"};
      for (std::size_t k = 0; k < taus.size(); ++k) out.table.rows.push_back(point_row({taus[k]}, result.points[k]));
      out.all_converged = result.unconverged_fraction() == 0.0;
      break;
    }
    case TaskType::landscape: {
      const sweep::LandscapeScenario sc{cfg.emitter, cfg.sensors[0], cfg.sensors[1], *cfg.omega1, *cfg.omega2};
      const auto result = sweep::run_frequency_landscape(sc, opts);
      const auto w1 = cfg.omega1->values();
      const auto w2 = cfg.omega2->values();
      out.kind = PlotKind::landscape;
      out.annotations = result.annotations;
      out.x_column = "omega1";
      out.y_column = "omega2";
      out.table.metadata.emplace_back("leapfrog_lines", describe_lines(result.annotations));
      convergence_metadata(out.table.metadata, result.points, tol);
      out.table.columns = {"omega1", "omega2", "g2", "epsilon", "converged"};
      for (std::size_t i = 0; i < w1.size(); ++i) {
        for (std::size_t j = 0; j < w2.size(); ++j) {
          out.table.rows.push_back(point_row({w1[i], w2[j]}, result.points[i * w2.size() + j]));
        }
      }
      out.all_converged = result.unconverged_fraction() == 0.0;
      break;
    }
    case TaskType::timefreq: {
      const sweep::TimeFrequencyScenario sc{cfg.emitter, cfg.sensors[0], cfg.sensors[1], *cfg.omega1, *cfg.tau};
      const auto result = sweep::run_time_frequency_map(sc, opts);
      const auto w1 = cfg.omega1->values();
      const auto taus = cfg.tau->values();
      out.kind = PlotKind::landscape;
      out.annotations = result.annotations;
      out.x_column = "omega1";
      out.y_column = "tau";
      out.table.metadata.emplace_back("omega2", format_number(cfg.sensors[1].frequency));
      out.table.metadata.emplace_back("leapfrog_lines", describe_lines(result.annotations));
      convergence_metadata(out.table.metadata, result.points, tol);
      out.table.columns = {"omega1", "tau", "g2", "epsilon", "converged"};
      for (std::size_t i = 0; i < w1.size(); ++i) {
        for (std::size_t k = 0; k < taus.size(); ++k) {
          out.table.rows.push_back(point_row({w1[i], taus[k]}, result.points[i * taus.size() + k]));
        }
      }
      out.all_converged = result.unconverged_fraction() == 0.0;
      break;
    }
    case TaskType::compare_approx: {
      const double linewidth = cfg.sensors[0].linewidth;
      const double split = fluorescence::dressed_splitting(cfg.emitter).splitting;
      const bool high_first = cfg.order == fluorescence::SidebandOrder::high_then_low;
      sensing::SensorSpec first{high_first ? split : -split, linewidth, 1, cfg.epsilon};
      sensing::SensorSpec second{high_first ? -split : split, linewidth, 1, cfg.epsilon};
      const auto taus = cfg.tau->values();
      const auto exact = sensing::bundle_g2_tau(cfg.emitter, first, second, taus, opts.sensing);
      const auto approx = fluorescence::schrama_sideband_g2(cfg.emitter, linewidth, cfg.order, taus);
      out.kind = PlotKind::comparison;
      out.table.metadata.emplace_back("order", std::string(fluorescence::to_string(cfg.order)));
      out.table.metadata.emplace_back("approximation", "secular dressed-state cascade with Lorentzian filter response");
      convergence_metadata(out.table.metadata, exact, tol);
      out.table.columns = {"tau", "g2_exact", "g2_approx", "epsilon", "converged"};
      for (std::size_t k = 0; k < taus.size(); ++k) {
        out.table.rows.push_back({taus[k], exact[k].value, approx[k], exact[k].epsilon_used,
                                  exact[k].converged ? 1.0 : 0.0});
      }
      out.all_converged = std::all_of(exact.begin(), exact.end(), [](const auto& r) { return r.converged; });
      break;
    }
  }
  return out;
}

// ------------------------------------------------------------ plot script ---

std::string plot_script(const TaskOutput& output, std::string_view csv_relative) {
  std::ostringstream py;
  py << "#!/usr/bin/env python3\n"
        "# Generated by mollow " << kToolVersion << ". Renders " << csv_relative << ".\n"
        "import os\n"
        "import numpy as np\n"
        "import matplotlib\n"
        "matplotlib.use('Agg')\n"
        "import matplotlib.pyplot as plt\n"
        "from matplotlib.colors import TwoSlopeNorm\n\n"
        "here = os.path.dirname(os.path.abspath(__file__))\n"
        "csv = os.path.join(here, '" << csv_relative << "')\n"
        "with open(csv) as fh:\n"
        "    lines = [line for line in fh if not line.startswith('#')]\n"
        "names = lines[0].strip().split(',')\n"
        "table = np.loadtxt(lines[1:], delimiter=',', ndmin=2)\n"
        "data = {name: table[:, i] for i, name in enumerate(names)}\n"
        "fig, ax = plt.subplots(figsize=(6, 5))\n";

  switch (output.kind) {
    case PlotKind::landscape: {
      const std::string& x = output.x_column;
      const std::string& y = output.y_column;
      py << "xs = np.unique(data['" << x << "'])\n"
            "ys = np.unique(data['" << y << "'])\n"
            "g2 = data['g2'].reshape(len(xs), len(ys)).T\n"
            "# log scale, diverging around g2 = 1: red bunching, blue antibunching, white uncorrelated\n"
            "logg = np.log10(np.clip(g2, 1e-300, None))\n"
            "span = max(np.abs(logg).max(), 1e-3)\n"
            "norm = TwoSlopeNorm(vmin=-span, vcenter=0.0, vmax=span)\n"
            "mesh = ax.pcolormesh(xs, ys, logg, cmap='bwr', norm=norm, shading='nearest')\n"
            "fig.colorbar(mesh, ax=ax, label='log10 g2')\n";
      if (y == "omega2") {
        py << "lines = [";
        for (const auto& l : output.annotations) {
          py << "(" << l.n1 << ", " << l.n2 << ", " << format_number(l.offset) << "), ";
        }
        py << "]\n"
              "for n1, n2, c in lines:\n"
              "    ax.plot(xs, (c - n1 * xs) / n2, 'k--', lw=0.6)\n"
              "ax.set_ylim(ys.min(), ys.max())\n";
      }
      py << "ax.set_xlim(xs.min(), xs.max())\n"
            "ax.set_xlabel('" << x << (x == "tau" ? " (1/gamma)" : " (gamma)") << "')\n"
            "ax.set_ylabel('" << y << (y == "tau" ? " (1/gamma)" : " (gamma)") << "')\n";
      break;
    }
    case PlotKind::trace:
      py << "ax.plot(data['tau'], data['g2'], lw=1.2)\n"
            "ax.axhline(1.0, color='grey', lw=0.5)\n"
            "ax.set_xlabel('tau (1/gamma)')\n"
            "ax.set_ylabel('g2')\n";
      break;
    case PlotKind::spectrum:
      py << "ax.plot(data['omega'], data['intensity'], lw=1.2)\n"
            "ax.set_xlabel('omega (gamma)')\n"
            "ax.set_ylabel('filtered spectrum')\n";
      break;
    case PlotKind::comparison:
      py << "ax.plot(data['tau'], data['g2_exact'], color='tab:blue', label='sensor method')\n"
            "ax.plot(data['tau'], data['g2_approx'], color='tab:green', ls='--', label='dressed-state approximation')\n"
            "ax.axhline(1.0, color='grey', lw=0.5)\n"
            "ax.legend()\n"
            "ax.set_xlabel('tau (1/gamma)')\n"
            "ax.set_ylabel('g2')\n";
      break;
  }
  py << "fig.tight_layout()\n"
        "fig.savefig(os.path.splitext(csv)[0] + '.png', dpi=150)\n";
  return py.str();
}

void emit_plot_script(const TaskOutput& output, const std::filesystem::path& csv_path,
                      const std::filesystem::path& script_path) {
  const auto base = script_path.has_parent_path() ? script_path.parent_path() : std::filesystem::path(".");
  const auto rel = std::filesystem::relative(std::filesystem::absolute(csv_path), std::filesystem::absolute(base));
  if (script_path.has_parent_path()) std::filesystem::create_directories(script_path.parent_path());
  std::ofstream out(script_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + script_path.string());
  out << plot_script(output, rel.generic_string());
}

} // namespace mollow::io
