// Copyright 2026 The eitmem Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eitmem/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>

#include <CLI11.hpp>
#include <json.hpp>

#include "eitmem/errors.hpp"
#include "eitmem/io.hpp"
#include "eitmem/shapes.hpp"
#include "eitmem/svg.hpp"

namespace eitmem {

using nlohmann::json;

namespace {

double require_number(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError(path + "." + key, "missing required field");
  if (!j.at(key).is_number()) throw ConfigError(path + "." + key, "must be a number");
  return j.at(key).get<double>();
}

std::vector<double> number_list(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError(path + "." + key, "missing required field");
  const auto& v = j.at(key);
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array()) {
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(path + "." + key, "must contain numbers");
      out.push_back(e.get<double>());
    }
  } else {
    throw ConfigError(path + "." + key, "must be a number or array of numbers");
  }
  if (out.empty()) throw ConfigError(path + "." + key, "must be nonempty");
  return out;
}

FieldSpec parse_field_spec(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "must be an object");
  FieldSpec fs;
  int forms = 0;
  if (j.contains("file")) {
    fs.file = j.at("file").get<std::string>();
    ++forms;
  }
  if (j.contains("shape")) {
    fs.shape = j.at("shape").get<std::string>();
    fs.duration_us = require_number(j, "duration_us", path);
    if (!(fs.duration_us > 0.0)) throw ConfigError(path + ".duration_us", "must be > 0");
    ++forms;
  }
  if (j.contains("power_mW")) {
    fs.power_mW = require_number(j, "power_mW", path);
    if (*fs.power_mW < 0.0) throw ConfigError(path + ".power_mW", "must be >= 0");
    ++forms;
  }
  if (j.contains("rabi_rad_per_us")) {
    fs.rabi = require_number(j, "rabi_rad_per_us", path);
    if (*fs.rabi < 0.0) throw ConfigError(path + ".rabi_rad_per_us", "must be >= 0");
    ++forms;
  }
  if (forms != 1)
    throw ConfigError(path, "exactly one of file | shape | power_mW | rabi_rad_per_us expected");
  if (j.contains("window_us")) fs.window_us = require_number(j, "window_us", path);
  return fs;
}

SampledPulse build_signal(const FieldSpec& fs, double nt_per_us, const std::string& path) {
  if (!fs.file.empty()) {
    if (!std::filesystem::exists(fs.file))
      throw ConfigError(path + ".file", "pulse file not found: " + fs.file);
    return read_pulse_csv(fs.file);
  }
  if (!fs.shape.empty()) return make_shape(fs.shape, fs.duration_us, nt_per_us);
  throw ConfigError(path, "a signal needs file or shape");
}

double control_rabi(const FieldSpec& fs, const std::string& path) {
  if (fs.rabi) return *fs.rabi;
  if (fs.power_mW) return rabi_from_power_mW(*fs.power_mW);
  throw ConfigError(path, "a control needs power_mW or rabi_rad_per_us (or file)");
}

std::vector<double> abs_values(const SampledPulse& p) {
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = std::abs(p.samples[i]);
  return out;
}

std::vector<double> times(const SampledPulse& p) {
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p.time_at(i);
  return out;
}

json medium_json(const MediumParams& m) {
  return json{{"alpha_L", m.alpha_L},
              {"gamma_rad_per_us", m.gamma},
              {"gamma_s_rad_per_us", m.gamma_s},
              {"length_m", m.length}};
}

void write_json(const std::filesystem::path& p, const json& j) {
  std::ofstream f(p);
  if (!f) throw RangeError("cannot write " + p.string());
  f << j.dump(2) << "\n";
}

}  // namespace

RunConfig RunConfig::load(const std::string& command, const std::filesystem::path& config_path,
                          const std::optional<std::string>& run_id_override,
                          const std::optional<std::string>& out_override) {
  if (!std::filesystem::exists(config_path))
    throw ConfigError("config", "file not found: " + config_path.string());
  json j;
  {
    std::ifstream f(config_path);
    try {
      f >> j;
    } catch (const std::exception& e) {
      throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
  }
  RunConfig cfg;
  cfg.command = command;
  cfg.config_hash = fnv1a_hex(command + ":" + j.dump());

  // medium: direct or calibrated form, exactly one
  if (!j.contains("medium") || !j.at("medium").is_object())
    throw ConfigError("medium", "missing required block");
  const json& jm = j.at("medium");
  const bool direct = jm.contains("alpha_L") || jm.contains("gamma_rad_per_s") ||
                      jm.contains("gamma_s_rad_per_s") || jm.contains("length_m");
  const bool calibrated = jm.contains("temperature_C") || jm.contains("control_power_mW");
  if (direct == calibrated)
    throw ConfigError("medium",
                      "exactly one of the direct {alpha_L, gamma_rad_per_s, gamma_s_rad_per_s, "
                      "length_m} or calibrated {temperature_C, control_power_mW} forms expected");
  if (direct) {
    cfg.medium.alpha_L = require_number(jm, "alpha_L", "medium");
    cfg.medium.gamma = require_number(jm, "gamma_rad_per_s", "medium") * 1e-6;
    cfg.medium.gamma_s = require_number(jm, "gamma_s_rad_per_s", "medium") * 1e-6;
    cfg.medium.length = require_number(jm, "length_m", "medium");
  } else {
    const double T = require_number(jm, "temperature_C", "medium");
    const double P = require_number(jm, "control_power_mW", "medium");
    try {
      const auto [aL, rabi] = calibrate(T, P, CalibrationAnchors::defaults());
      cfg.medium = default_medium(aL);
      cfg.configured_rabi = rabi;
    } catch (const Error& e) {
      throw ConfigError("medium", e.what());
    }
  }
  try {
    cfg.medium.validate();
  } catch (const Error& e) {
    throw ConfigError("medium", e.what());
  }

  if (j.contains("grid")) {
    const json& jg = j.at("grid");
    if (jg.contains("nz")) cfg.grid.nz = int(require_number(jg, "nz", "grid"));
    if (jg.contains("nt_per_us")) cfg.grid.nt_per_us = require_number(jg, "nt_per_us", "grid");
    if (jg.contains("mode")) {
      const std::string mode = jg.at("mode").get<std::string>();
      if (mode == "adiabatic")
        cfg.grid.mode = SolverMode::adiabatic;
      else if (mode == "full")
        cfg.grid.mode = SolverMode::full;
      else
        throw ConfigError("grid.mode", "must be 'adiabatic' or 'full'");
    }
  }
  try {
    cfg.grid.validate();
  } catch (const Error& e) {
    throw ConfigError("grid", e.what());
  }

  cfg.run_id = run_id_override.value_or(
      j.value("run_id", std::string("run-") + cfg.config_hash.substr(0, 12)));
  std::string out_root;
  if (out_override) {
    out_root = *out_override;
  } else if (j.contains("output_dir")) {
    out_root = j.at("output_dir").get<std::string>();
  } else if (const char* env = std::getenv("EITMEM_OUT")) {
    out_root = env;
  } else {
    out_root = ".";
  }
  cfg.output_dir = std::filesystem::path(out_root) / cfg.run_id;

  if (command == "simulate") {
    if (!j.contains("simulate")) throw ConfigError("simulate", "missing command block");
    const json& js = j.at("simulate");
    if (!js.contains("input")) throw ConfigError("simulate.input", "missing required field");
    cfg.sim_input = parse_field_spec(js.at("input"), "simulate.input");
    cfg.tau_us = js.contains("tau_us") ? require_number(js, "tau_us", "simulate") : 0.0;
    if (cfg.tau_us < 0.0) throw ConfigError("simulate.tau_us", "must be >= 0");
    if (js.contains("write_control"))
      cfg.sim_write_control = parse_field_spec(js.at("write_control"), "simulate.write_control");
    else if (cfg.configured_rabi > 0.0)
      cfg.sim_write_control.rabi = cfg.configured_rabi;
    else
      throw ConfigError("simulate.write_control", "missing (and medium is not calibrated)");
    if (js.contains("read_control"))
      cfg.sim_read_control = parse_field_spec(js.at("read_control"), "simulate.read_control");
    else
      cfg.sim_read_control = cfg.sim_write_control;
  } else if (command == "iterate") {
    if (!j.contains("iterate")) throw ConfigError("iterate", "missing command block");
    const json& ji = j.at("iterate");
    if (ji.contains("control_powers_mW"))
      cfg.iter_powers_mW = number_list(ji, "control_powers_mW", "iterate");
    else if (cfg.configured_rabi > 0.0)
      cfg.iter_powers_mW = {};  // single run with the calibrated control
    else
      throw ConfigError("iterate.control_powers_mW", "missing required field");
    cfg.tau_us = ji.contains("tau_us") ? require_number(ji, "tau_us", "iterate") : 0.0;
    if (cfg.tau_us < 0.0) throw ConfigError("iterate.tau_us", "must be >= 0");
    if (ji.contains("input")) cfg.iter_input = parse_field_spec(ji.at("input"), "iterate.input");
    if (ji.contains("tol")) cfg.iter_tol = require_number(ji, "tol", "iterate");
    if (ji.contains("max_iter")) cfg.iter_max = int(require_number(ji, "max_iter", "iterate"));
    if (cfg.iter_max < 0) throw ConfigError("iterate.max_iter", "must be >= 0");
    if (ji.contains("window_us")) cfg.iter_window_us = require_number(ji, "window_us", "iterate");
  } else if (command == "optimize-control") {
    if (!j.contains("optimize_control"))
      throw ConfigError("optimize_control", "missing command block");
    const json& jo = j.at("optimize_control");
    cfg.tau_us = jo.contains("tau_us") ? require_number(jo, "tau_us", "optimize_control") : 0.0;
    if (jo.contains("inputs")) {
      if (!jo.at("inputs").is_array() || jo.at("inputs").empty())
        throw ConfigError("optimize_control.inputs", "must be a nonempty array");
      std::size_t k = 0;
      for (const auto& e : jo.at("inputs"))
        cfg.opt_inputs.push_back(
            parse_field_spec(e, "optimize_control.inputs[" + std::to_string(k++) + "]"));
    } else {
      for (const char* s : {"rounded_step", "sinc_segment", "descending_ramp"}) {
        FieldSpec fs;
        fs.shape = s;
        fs.duration_us = 20.0;
        cfg.opt_inputs.push_back(fs);
      }
    }
    if (jo.contains("max_rabi_rad_per_us"))
      cfg.opt_options.max_rabi = require_number(jo, "max_rabi_rad_per_us", "optimize_control");
    if (jo.contains("max_iters"))
      cfg.opt_options.max_ascent_iters = int(require_number(jo, "max_iters", "optimize_control"));
    if (jo.contains("target_tol"))
      cfg.opt_options.target_tol = require_number(jo, "target_tol", "optimize_control");
  } else if (command == "scan") {
    if (!j.contains("scan")) throw ConfigError("scan", "missing command block");
    const json& js = j.at("scan");
    cfg.scan_powers_mW = number_list(js, "control_powers_mW", "scan");
    cfg.scan_alpha_L = number_list(js, "alpha_L_values", "scan");
    cfg.tau_us = js.contains("tau_us") ? require_number(js, "tau_us", "scan") : 100.0;
  } else {
    throw ConfigError("command", "unknown command " + command);
  }
  return cfg;
}

int cmd_simulate(const RunConfig& cfg) {
  std::filesystem::create_directories(cfg.output_dir);
  const SampledPulse e_in = build_signal(cfg.sim_input, cfg.grid.nt_per_us, "simulate.input");
  e_in.validate();
  if (std::abs(e_in.t_end) > 1e-6)
    throw ConfigError("simulate.input", "input window must end at t = 0");

  SampledPulse omega_write;
  if (!cfg.sim_write_control.file.empty()) {
    omega_write = build_signal(cfg.sim_write_control, cfg.grid.nt_per_us,
                               "simulate.write_control");
  } else {
    omega_write = constant_pulse(e_in.t_start, e_in.t_end,
                                 control_rabi(cfg.sim_write_control, "simulate.write_control"),
                                 e_in.size());
  }
  SampledPulse omega_read;
  if (!cfg.sim_read_control.file.empty()) {
    omega_read = build_signal(cfg.sim_read_control, cfg.grid.nt_per_us, "simulate.read_control");
  } else {
    const double rabi = control_rabi(cfg.sim_read_control, "simulate.read_control");
    if (!(rabi > 0.0)) throw ConfigError("simulate.read_control", "read control must be > 0");
    const double win = cfg.sim_read_control.window_us.value_or(
        completion_window_us(cfg.medium, rabi));
    omega_read = constant_pulse(cfg.tau_us, cfg.tau_us + win, rabi,
                                std::size_t(std::ceil(win * cfg.grid.nt_per_us)) + 1);
  }

  const ProtocolResult res =
      run_protocol(e_in, omega_write, omega_read, cfg.tau_us, cfg.medium, cfg.grid);

  write_pulse_csv(cfg.output_dir / "input.csv", e_in, cfg.config_hash);
  write_pulse_csv(cfg.output_dir / "leak.csv", res.leak, cfg.config_hash);
  write_pulse_csv(cfg.output_dir / "retrieved.csv", res.retrieved, cfg.config_hash);
  write_pulse_csv(cfg.output_dir / "write_control.csv", omega_write, cfg.config_hash);
  write_pulse_csv(cfg.output_dir / "read_control.csv", omega_read, cfg.config_hash);
  write_spinwave_csv(cfg.output_dir / "spin_after_write.csv", res.spin_after_write,
                     cfg.config_hash);
  write_spinwave_csv(cfg.output_dir / "spin_after_storage.csv", res.spin_after_storage,
                     cfg.config_hash);

  json summary{{"config_hash", cfg.config_hash},
               {"run_id", cfg.run_id},
               {"medium", medium_json(cfg.medium)},
               {"tau_us", cfg.tau_us},
               {"efficiency", res.efficiency},
               {"leak_fraction", res.leak_fraction},
               {"stored_fraction", res.stored_fraction}};
  write_json(cfg.output_dir / "summary.json", summary);

  // signal panel with the control overlaid at the signal scale
  SvgAxes ax;
  ax.title = "light storage (run " + cfg.run_id + ", cfg " + cfg.config_hash.substr(0, 8) + ")";
  ax.xlabel = "t (us)";
  ax.ylabel = "|amplitude| (norm.)";
  double sig_max = 1e-300;
  for (const auto* p : {&e_in, &res.leak, &res.retrieved})
    for (const auto& v : p->samples) sig_max = std::max(sig_max, std::abs(v));
  double ctl_max = 1e-300;
  for (const auto* p : {&omega_write, &omega_read})
    for (const auto& v : p->samples) ctl_max = std::max(ctl_max, std::abs(v));
  auto scaled = [&](const SampledPulse& p, double scale) {
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = std::abs(p.samples[i]) * scale;
    return out;
  };
  ax.series.push_back({times(e_in), scaled(e_in, 1.0 / sig_max), "#000000", "input", 1.5, false});
  ax.series.push_back({times(res.leak), scaled(res.leak, 1.0 / sig_max), "#777777", "leak", 1.2,
                       false});
  ax.series.push_back({times(res.retrieved), scaled(res.retrieved, 1.0 / sig_max), "#c02020",
                       "retrieved", 1.5, false});
  ax.series.push_back(
      {times(omega_write), scaled(omega_write, 1.0 / ctl_max), "#2050c0", "control", 1.0, true});
  ax.series.push_back(
      {times(omega_read), scaled(omega_read, 1.0 / ctl_max), "#2050c0", "", 1.0, true});
  write_svg_plot(cfg.output_dir / "simulate.svg", ax);

  std::cout << "simulate: efficiency = " << res.efficiency << " (leak " << res.leak_fraction
            << ", stored " << res.stored_fraction << ") -> " << cfg.output_dir.string() << "\n";
  return kExitOk;
}

int cmd_iterate(const RunConfig& cfg, int /*jobs*/) {
  std::filesystem::create_directories(cfg.output_dir);
  std::vector<double> rabis;
  std::vector<std::string> labels;
  if (cfg.iter_powers_mW.empty()) {
    rabis.push_back(cfg.configured_rabi);
    labels.push_back("configured");
  } else {
    for (double p : cfg.iter_powers_mW) {
      rabis.push_back(rabi_from_power_mW(p));
      labels.push_back(format_g12(p) + "mW");
    }
  }

  json traces = json::array();
  std::vector<SvgSeries> eff_series;
  const char* colors[] = {"#c02020", "#2050c0", "#208020", "#806020", "#802080"};
  for (std::size_t i = 0; i < rabis.size(); ++i) {
    const double rabi = rabis[i];
    if (!(rabi > 0.0)) throw ConfigError("iterate.control_powers_mW", "control must be > 0");
    const double window = cfg.iter_window_us.value_or(completion_window_us(cfg.medium, rabi));
    const SampledPulse ctrl = constant_pulse(-window, 0.0, rabi,
                                             std::size_t(std::ceil(window * cfg.grid.nt_per_us)) +
                                                 1);
    SampledPulse seed;
    if (!cfg.iter_input.file.empty() || !cfg.iter_input.shape.empty()) {
      seed = build_signal(cfg.iter_input, cfg.grid.nt_per_us, "iterate.input");
      seed = resample(seed, ctrl.size(), {-window, 0.0});
      seed = normalize(seed);
    } else {
      seed = default_iteration_seed(cfg.medium, rabi, window, cfg.grid.nt_per_us);
    }
    const OptimizationTrace tr = iterate_signal(seed, ctrl, cfg.tau_us, cfg.medium, cfg.grid,
                                                cfg.iter_tol, cfg.iter_max);

    const auto dir = cfg.output_dir / labels[i];
    std::filesystem::create_directories(dir);
    json jt{{"label", labels[i]},
            {"rabi_rad_per_us", rabi},
            {"window_us", window},
            {"converged", tr.converged},
            {"final_efficiency", tr.final_efficiency},
            {"iterations", json::array()}};
    std::vector<SvgAxes> panels;
    std::vector<double> eff_x, eff_y;
    for (std::size_t k = 0; k < tr.iterations.size(); ++k) {
      const auto& it = tr.iterations[k];
      jt["iterations"].push_back(json{{"iteration", k},
                                      {"efficiency", it.efficiency},
                                      {"overlap_with_previous", it.overlap_with_previous}});
      write_pulse_csv(dir / ("iter_" + std::to_string(k) + "_input.csv"), it.input,
                      cfg.config_hash);
      write_pulse_csv(dir / ("iter_" + std::to_string(k) + "_leak.csv"), it.leak, cfg.config_hash);
      write_pulse_csv(dir / ("iter_" + std::to_string(k) + "_retrieved.csv"), it.retrieved,
                      cfg.config_hash);
      eff_x.push_back(double(k));
      eff_y.push_back(it.efficiency);
      if (k < 6) {  // figure shows the first iterations, inputs left / outputs right
        SvgAxes in_ax;
        in_ax.title = "iteration " + std::to_string(k) + " input" +
                      (k == 0 ? " (cfg " + cfg.config_hash.substr(0, 8) + ")" : "");
        in_ax.xlabel = "t (us)";
        in_ax.ylabel = "|E|";
        in_ax.series.push_back({times(it.input), abs_values(it.input), "#000000", "", 1.4, false});
        SvgAxes out_ax;
        out_ax.title = "iteration " + std::to_string(k) +
                       " output (eta " + format_g12(std::round(it.efficiency * 1e4) / 1e4) + ")";
        out_ax.xlabel = "t (us)";
        out_ax.ylabel = "|E|";
        out_ax.series.push_back({times(it.leak), abs_values(it.leak), "#777777", "leak", 1.2,
                                 false});
        out_ax.series.push_back(
            {times(it.retrieved), abs_values(it.retrieved), "#c02020", "retrieved", 1.4, false});
        panels.push_back(std::move(in_ax));
        panels.push_back(std::move(out_ax));
      }
    }
    write_pulse_csv(dir / "final_input.csv", tr.final_input, cfg.config_hash);
    write_svg_grid(dir / "iterations.svg", panels, 2);
    traces.push_back(std::move(jt));
    eff_series.push_back(
        {eff_x, eff_y, colors[i % 5], labels[i], 1.5, false});
    std::cout << "iterate [" << labels[i] << "]: eta = " << tr.final_efficiency << " after "
              << tr.iterations.size() << " runs (converged: " << (tr.converged ? "yes" : "no")
              << ")\n";
  }

  write_json(cfg.output_dir / "trace.json",
             json{{"config_hash", cfg.config_hash},
                  {"run_id", cfg.run_id},
                  {"medium", medium_json(cfg.medium)},
                  {"tau_us", cfg.tau_us},
                  {"tol", cfg.iter_tol},
                  {"max_iter", cfg.iter_max},
                  {"traces", traces}});

  SvgAxes eff_ax;
  eff_ax.title = "memory efficiency per iteration (cfg " + cfg.config_hash.substr(0, 8) + ")";
  eff_ax.xlabel = "iteration";
  eff_ax.ylabel = "efficiency";
  eff_ax.series = eff_series;
  write_svg_plot(cfg.output_dir / "efficiency.svg", eff_ax);
  return kExitOk;
}

int cmd_optimize_control(const RunConfig& cfg) {
  std::filesystem::create_directories(cfg.output_dir);
  int warnings = 0;

  std::vector<SampledPulse> inputs;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < cfg.opt_inputs.size(); ++i) {
    inputs.push_back(build_signal(cfg.opt_inputs[i], cfg.grid.nt_per_us,
                                  "optimize_control.inputs[" + std::to_string(i) + "]"));
    names.push_back(cfg.opt_inputs[i].shape.empty() ? ("input" + std::to_string(i))
                                                    : cfg.opt_inputs[i].shape);
  }

  // one shared flat retrieval control so shape invariance is comparable
  const double om_r = std::sqrt(cfg.medium.alpha_L * cfg.medium.gamma / 15.0);
  const double Tr = completion_window_us(cfg.medium, om_r);
  const SampledPulse flat_read =
      constant_pulse(cfg.tau_us, cfg.tau_us + Tr, om_r,
                     std::size_t(std::ceil(Tr * cfg.grid.nt_per_us)) + 1);

  json report{{"config_hash", cfg.config_hash},
              {"run_id", cfg.run_id},
              {"medium", medium_json(cfg.medium)},
              {"tau_us", cfg.tau_us},
              {"inputs", json::array()}};
  std::vector<SampledPulse> flat_outputs;
  std::vector<SpinWave> stored;

  ControlOptOptions opts = cfg.opt_options;
  opts.retrieval_rabi = om_r;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const ControlOptResult r = optimize_control(inputs[i], cfg.medium, cfg.tau_us, cfg.grid, opts);
    write_pulse_csv(cfg.output_dir / (names[i] + "_control.csv"), r.omega_write, cfg.config_hash);
    write_pulse_csv(cfg.output_dir / (names[i] + "_input.csv"), inputs[i], cfg.config_hash);

    // verification runs: flat retrieval and time-reversed-control retrieval
    const ProtocolResult flat_res =
        run_protocol(inputs[i], r.omega_write, flat_read, cfg.tau_us, cfg.medium, cfg.grid);
    const double Tw = r.omega_write.t_end - r.omega_write.t_start;
    const SampledPulse rev_read =
        shift_window(time_reverse(r.omega_write), cfg.tau_us + Tw);
    const ProtocolResult rev_res =
        run_protocol(inputs[i], r.omega_write, rev_read, cfg.tau_us, cfg.medium, cfg.grid);
    const double reversal_overlap = overlap(
        rev_res.retrieved, shift_window(time_reverse(inputs[i]), cfg.tau_us + Tw));

    write_pulse_csv(cfg.output_dir / (names[i] + "_flat_retrieval.csv"), flat_res.retrieved,
                    cfg.config_hash);
    write_pulse_csv(cfg.output_dir / (names[i] + "_reversed_retrieval.csv"), rev_res.retrieved,
                    cfg.config_hash);
    flat_outputs.push_back(flat_res.retrieved);
    stored.push_back(flat_res.spin_after_write);

    if (!r.at_optimum) {
      ++warnings;
      std::cout << "warning: " << names[i] << " did not reach the target efficiency ("
                << r.achieved_eta << " vs " << r.target_eta << ")\n";
    }
    report["inputs"].push_back(json{{"name", names[i]},
                                    {"achieved_eta", r.achieved_eta},
                                    {"target_eta", r.target_eta},
                                    {"at_optimum", r.at_optimum},
                                    {"ascent_iters", r.ascent_iters},
                                    {"flat_retrieval_eta", flat_res.efficiency},
                                    {"reversed_retrieval_overlap", reversal_overlap}});
    std::cout << "optimize-control [" << names[i] << "]: eta = " << r.achieved_eta
              << " (target " << r.target_eta << ", reversal overlap " << reversal_overlap
              << ")\n";
  }

  json pair_overlaps = json::array();
  for (std::size_t a = 0; a < inputs.size(); ++a)
    for (std::size_t b = a + 1; b < inputs.size(); ++b)
      pair_overlaps.push_back(json{{"a", names[a]},
                                   {"b", names[b]},
                                   {"flat_output_overlap", overlap(flat_outputs[a],
                                                                   flat_outputs[b])},
                                   {"stored_spinwave_overlap", spin_overlap(stored[a],
                                                                            stored[b])}});
  report["pairwise"] = pair_overlaps;
  report["warnings"] = warnings;
  write_json(cfg.output_dir / "report.json", report);
  if (warnings) std::cout << warnings << " warning(s)\n";
  return kExitOk;
}

int cmd_scan(const RunConfig& cfg, int jobs) {
  std::filesystem::create_directories(cfg.output_dir);
  int warnings = 0;

  // decay-free reference curve, point by point so one bad depth cannot kill
  // the whole scan
  std::vector<std::pair<double, double>> curve;
  for (double aL : cfg.scan_alpha_L) {
    try {
      curve.push_back(max_efficiency_curve({aL}, cfg.medium, cfg.grid).front());
    } catch (const std::exception& e) {
      ++warnings;
      std::cout << "warning: no-decay point alpha_L=" << aL << " failed: " << e.what() << "\n";
      curve.emplace_back(aL, std::numeric_limits<double>::quiet_NaN());
    }
  }
  const double storage_factor = storage_decay_factor(cfg.medium, cfg.tau_us);
  const auto points = efficiency_vs_depth_scan(cfg.scan_powers_mW, cfg.scan_alpha_L,
                                               cfg.medium.gamma_s, cfg.tau_us, cfg.medium,
                                               cfg.grid, jobs);

  std::ofstream csv(cfg.output_dir / "scan.csv");
  csv << "# config_hash=" << cfg.config_hash << "\n";
  csv << "kind,power_mW,alpha_L,eta,converged,iterations,gamma_rad_per_us,gamma_s_rad_per_us,"
         "tau_us,nz,nt_per_us\n";
  auto row_tail = [&](double gs) {
    return std::string(",") + format_g12(cfg.medium.gamma) + "," + format_g12(gs) + "," +
           format_g12(cfg.tau_us) + "," + std::to_string(cfg.grid.nz) + "," +
           format_g12(cfg.grid.nt_per_us);
  };
  auto eta_str = [](double v) {
    return std::isfinite(v) ? format_g12(v) : std::string("nan");
  };
  for (const auto& [aL, eta] : curve)
    csv << "no_decay,0," << format_g12(aL) << "," << eta_str(eta) << ",1,0" << row_tail(0.0)
        << "\n";
  for (const auto& [aL, eta] : curve)
    csv << "storage_decay,0," << format_g12(aL) << "," << eta_str(eta * storage_factor)
        << ",1,0" << row_tail(0.0) << "\n";
  for (const auto& pt : points) {
    if (!pt.ok) {
      ++warnings;
      std::cout << "warning: point (P=" << pt.power_mW << " mW, alpha_L=" << pt.alpha_L
                << ") failed: " << pt.error << "\n";
    }
    csv << "power," << format_g12(pt.power_mW) << "," << format_g12(pt.alpha_L) << ","
        << (pt.ok ? format_g12(pt.eta) : std::string("nan")) << "," << (pt.converged ? 1 : 0)
        << "," << pt.iterations << row_tail(cfg.medium.gamma_s) << "\n";
  }
  csv.close();

  SvgAxes ax;
  ax.title = "efficiency vs optical depth (cfg " + cfg.config_hash.substr(0, 8) + ")";
  ax.xlabel = "alpha L";
  ax.ylabel = "efficiency";
  SvgSeries thin, thick;
  for (const auto& [aL, eta] : curve) {
    if (!std::isfinite(eta)) continue;
    thin.x.push_back(aL);
    thin.y.push_back(eta);
    thick.x.push_back(aL);
    thick.y.push_back(eta * storage_factor);
  }
  thin.color = "#000000";
  thin.width = 1.0;
  thin.label = "no decay";
  thick.color = "#000000";
  thick.width = 2.4;
  thick.label = "storage decay";
  ax.series.push_back(thin);
  ax.series.push_back(thick);
  const char* colors[] = {"#c02020", "#2050c0", "#208020", "#806020", "#802080"};
  for (std::size_t pi = 0; pi < cfg.scan_powers_mW.size(); ++pi) {
    SvgSeries s;
    s.color = colors[pi % 5];
    s.label = format_g12(cfg.scan_powers_mW[pi]) + " mW";
    s.width = 1.5;
    for (const auto& pt : points)
      if (pt.ok && pt.power_mW == cfg.scan_powers_mW[pi]) {
        s.x.push_back(pt.alpha_L);
        s.y.push_back(pt.eta);
      }
    ax.series.push_back(std::move(s));
  }
  write_svg_plot(cfg.output_dir / "scan.svg", ax);

  write_json(cfg.output_dir / "scan_summary.json",
             json{{"config_hash", cfg.config_hash},
                  {"run_id", cfg.run_id},
                  {"medium", medium_json(cfg.medium)},
                  {"tau_us", cfg.tau_us},
                  {"storage_decay_factor", storage_factor},
                  {"warnings", warnings}});
  std::cout << "scan: " << points.size() << " points, " << warnings << " warning(s) -> "
            << cfg.output_dir.string() << "\n";
  return kExitOk;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"eitmem: EIT light-storage simulation and optimization"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> run_id, out_dir;
  int jobs = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--jobs", jobs, "parallel workers for scans");
    sub->add_option("--out", out_dir, "output root (default $EITMEM_OUT or .)");
    sub->add_option("--run-id", run_id, "run directory name (default derived from config hash)");
  };
  CLI::App* sim = app.add_subcommand("simulate", "run the write/store/retrieve protocol");
  CLI::App* it = app.add_subcommand("iterate", "time-reversal signal-shape optimization");
  CLI::App* oc = app.add_subcommand("optimize-control", "optimal writing-control synthesis");
  CLI::App* sc = app.add_subcommand("scan", "efficiency vs optical depth scan");
  for (CLI::App* sub : {sim, it, oc, sc}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kExitConfig : kExitOk;
  }

  const std::string command = sim->parsed()  ? "simulate"
                              : it->parsed() ? "iterate"
                              : oc->parsed() ? "optimize-control"
                                             : "scan";
  try {
    const RunConfig cfg = RunConfig::load(command, config_path, run_id, out_dir);
    if (command == "simulate") return cmd_simulate(cfg);
    if (command == "iterate") return cmd_iterate(cfg, jobs);
    if (command == "optimize-control") return cmd_optimize_control(cfg);
    return cmd_scan(cfg, jobs);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace eitmem
