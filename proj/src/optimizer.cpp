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

#include "eitmem/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "eitmem/errors.hpp"

namespace eitmem {

namespace {

// Constant control level used inside the power iteration and as the default
// retrieval level: sqrt(alpha_L gamma / 15) puts the group delay at 7.5 us and
// the 20-delay completion window at 150 us for every depth. The decay-free
// optimum does not depend on this choice.
double internal_rabi(const MediumParams& m) { return std::sqrt(m.alpha_L * m.gamma / 15.0); }

SampledPulse zero_pulse(double t0, double t1) {
  return SampledPulse(t0, t1, std::vector<cxd>(2));
}

// 1%-99% energy quantile width, used to match a control level to a pulse.
double effective_duration(const SampledPulse& p) {
  const double h = p.dt();
  std::vector<double> cum(p.size(), 0.0);
  for (std::size_t i = 1; i < p.size(); ++i)
    cum[i] = cum[i - 1] + 0.5 * h * (std::norm(p.samples[i - 1]) + std::norm(p.samples[i]));
  const double total = cum.back();
  if (!(total > 0.0)) throw DegenerateInputError("effective_duration of a zero pulse");
  auto quantile = [&](double q) {
    const auto it = std::lower_bound(cum.begin(), cum.end(), q * total);
    return p.time_at(std::size_t(it - cum.begin()));
  };
  return std::max(quantile(0.99) - quantile(0.01), 2.0 * h);
}

}  // namespace

SampledPulse default_iteration_seed(const MediumParams& m, double rabi, double window_us,
                                    double nt_per_us) {
  const double td = group_delay_us(rabi, m);
  const double T0 = std::min(2.5 * td, 0.9 * window_us);
  const double rise = 0.3 * T0;
  const auto n = std::size_t(std::ceil(window_us * nt_per_us)) + 1;
  std::vector<cxd> s(n);
  const double h = window_us / double(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = -window_us + h * double(i);
    if (t < -T0) {
      s[i] = 0.0;
    } else {
      const double x = std::min((t + T0) / rise, 1.0);
      s[i] = x * x * (3.0 - 2.0 * x);
    }
  }
  return normalize(SampledPulse(-window_us, 0.0, std::move(s)));
}

OptimizationTrace iterate_signal(const SampledPulse& e0, const SampledPulse& omega_write,
                                 double tau, const MediumParams& m, const SolverGrid& grid,
                                 double tol, int max_iter) {
  if (tau < 0.0) throw ParameterError("tau must be >= 0");
  if (max_iter < 0) throw ParameterError("max_iter must be >= 0");
  const double e0_energy = energy(e0);
  if (!(e0_energy > 0.0)) throw DegenerateInputError("iterate_signal needs a nonzero input");

  const double window = omega_write.t_end - omega_write.t_start;
  const SampledPulse omega_read = shift_window(time_reverse(omega_write), tau + window);

  OptimizationTrace trace;
  SampledPulse e = normalize(e0);
  SampledPulse prev;
  for (int k = 0; k <= max_iter; ++k) {
    ProtocolResult res = run_protocol(e, omega_write, omega_read, tau, m, grid);
    if (energy(res.retrieved) < 1e-6 * energy(e))
      throw OptimizationStalledError("retrieved energy fell below 1e-6 of the input at iteration " +
                                     std::to_string(k));
    IterationRecord rec;
    rec.input = e;
    rec.efficiency = res.efficiency;
    rec.overlap_with_previous = (k == 0) ? 0.0 : overlap(e, prev);
    rec.leak = res.leak;
    rec.retrieved = res.retrieved;
    trace.iterations.push_back(rec);
    trace.final_input = e;
    trace.final_efficiency = res.efficiency;
    if (k >= 1 && rec.overlap_with_previous > 1.0 - tol) {
      trace.converged = true;
      break;
    }
    if (k == max_iter) break;
    prev = e;
    e = shift_window(normalize(time_reverse(res.retrieved)), -(tau + window));
  }
  return trace;
}

OptimalMode optimal_spin_wave(const MediumParams& m, const SolverGrid& grid) {
  MediumParams md = m;
  md.gamma_s = 0.0;  // the optimum is defined decay-free
  md.validate();
  grid.validate();
  if (!(md.alpha_L > 0.0)) throw ParameterError("optimal_spin_wave requires alpha_L > 0");

  const double om0 = internal_rabi(md);
  const double Tr = completion_window_us(md, om0);
  const auto n_ctrl = std::size_t(std::ceil(Tr * grid.nt_per_us)) + 1;
  const SampledPulse ctrl_r = constant_pulse(0.0, Tr, om0, n_ctrl);
  const SampledPulse ctrl_w = constant_pulse(-Tr, 0.0, om0, n_ctrl);

  SpinWave S(std::vector<cxd>(std::size_t(grid.nz), cxd{1.0, 0.0}));
  S = spin_scale(S, cxd{1.0 / std::sqrt(spin_norm2(S)), 0.0});

  constexpr int kMaxCycles = 200;
  std::vector<double> history;
  double eta = 0.0;
  int cycles = 0;
  for (int c = 0; c < kMaxCycles; ++c) {
    const SampledPulse out = retrieve(S, ctrl_r, md, grid);
    const SampledPulse back = shift_window(time_reverse(out), -Tr);
    const SpinWave S2 = propagate(back, ctrl_w, md, SpinWave{}, grid).s_final;
    const double n2 = spin_norm2(S2);
    if (!(n2 > 0.0) || !std::isfinite(n2))
      throw NumericalError("power iteration lost the spin wave at cycle " + std::to_string(c));
    eta = n2 / spin_norm2(S);
    history.push_back(eta);
    S = spin_scale(S2, cxd{1.0 / std::sqrt(n2), 0.0});
    cycles = c + 1;
    if (history.size() >= 4) {
      bool stable = true;
      for (int j = 1; j <= 3; ++j)
        stable = stable && std::abs(history.back() - history[history.size() - 1 - j]) <
                               1e-6 * history.back();
      if (stable) break;
    }
    if (c + 1 == kMaxCycles) {
      const double ratio =
          history.size() >= 2 ? history.back() / history[history.size() - 2] : 0.0;
      throw ConvergenceError("power iteration did not stabilize in " +
                                 std::to_string(kMaxCycles) + " cycles",
                             ratio);
    }
  }

  // fix the phase: real and positive at the spin wave's peak
  std::size_t jmax = 0;
  for (std::size_t j = 1; j < S.size(); ++j)
    if (std::abs(S.samples[j]) > std::abs(S.samples[jmax])) jmax = j;
  const double ph = std::arg(S.samples[jmax]);
  S = spin_scale(S, std::polar(1.0, -ph));

  OptimalMode mode;
  mode.spin_wave = std::move(S);
  mode.eta_max = eta;
  mode.cycles = cycles;
  return mode;
}

std::vector<std::pair<double, double>> max_efficiency_curve(
    const std::vector<double>& alpha_L_values, const MediumParams& m_template,
    const SolverGrid& grid) {
  std::vector<std::pair<double, double>> out;
  out.reserve(alpha_L_values.size());
  for (double aL : alpha_L_values) {
    if (!(aL > 0.0)) throw ParameterError("max_efficiency_curve requires alpha_L > 0");
    MediumParams m = m_template;
    m.alpha_L = aL;
    out.emplace_back(aL, optimal_spin_wave(m, grid).eta_max);
  }
  return out;
}

std::vector<double> control_gradient(const SampledPulse& e_in, const SampledPulse& omega_write,
                                     const SampledPulse& omega_read, double tau,
                                     const MediumParams& m, const SolverGrid& grid,
                                     double* eta_out) {
  const double e_in_energy = energy(e_in);
  const double amp = std::exp(-m.gamma_s * tau);
  const double C = std::sqrt(m.gamma * m.alpha_L * 0.5);
  const std::size_t nz = std::size_t(grid.nz);

  // forward writing pass
  FieldRecord fwd;
  const SpinWave S_T = propagate(e_in, omega_write, m, SpinWave{}, grid, &fwd).s_final;

  // fixed-control retrieval of the decayed spin wave
  const SpinWave S_tau = spin_scale(S_T, cxd{amp, 0.0});
  const SampledPulse out = retrieve(S_tau, omega_read, m, grid);
  const double eta = energy(out) / e_in_energy;
  if (eta_out) *eta_out = eta;

  // terminal adjoint state: (amp/E_in) * Rdag(out); the adjoint of retrieval
  // is the z-flip of storage with the time-reversed control
  const double Trd = omega_read.t_end - omega_read.t_start;
  const SampledPulse back = shift_window(time_reverse(out), -omega_read.t_start - Trd);
  const SampledPulse ctrl_back = shift_window(time_reverse(omega_read), -omega_read.t_start - Trd);
  SpinWave lam_tf = spin_flip(propagate(back, ctrl_back, m, SpinWave{}, grid).s_final);
  lam_tf = spin_scale(lam_tf, cxd{amp / e_in_energy, 0.0});

  // the adjoint writing pass is itself a retrieval-type run of the z-flipped
  // terminal state under the time-reversed writing control
  FieldRecord adj;
  const SampledPulse ctrl_rev = time_reverse(omega_write);
  propagate(zero_pulse(omega_write.t_start, omega_write.t_end), ctrl_rev, m,
            spin_flip(lam_tf), grid, &adj);
  if (adj.nt != fwd.nt)
    throw NumericalError("internal: forward/adjoint grids differ");

  const std::size_t nt = fwd.nt;
  const double dt_rec = fwd.times[1] - fwd.times[0];
  std::vector<double> wz(nz, 1.0 / double(nz - 1));
  wz.front() *= 0.5;
  wz.back() *= 0.5;

  // control samples at the record times
  std::vector<double> om_at(nt);
  for (std::size_t k = 0; k < nt; ++k) om_at[k] = omega_write.value_at(fwd.times[k]).real();

  std::vector<double> g(nt);
  for (std::size_t k = 0; k < nt; ++k) {
    const std::size_t ka = nt - 1 - k;  // adjoint record runs on reversed time
    double acc = 0.0;
    for (std::size_t j = 0; j < nz; ++j) {
      const cxd lam = adj.S[ka * nz + (nz - 1 - j)];
      const cxd phi = adj.E[ka * nz + (nz - 1 - j)];
      const cxd S = fwd.S[k * nz + j];
      const cxd E = fwd.E[k * nz + j];
      const cxd term = std::conj(lam) * ((2.0 * om_at[k] / m.gamma) * S + (C / m.gamma) * E) +
                       (C / m.gamma) * std::conj(phi) * S;
      acc += wz[j] * term.real();
    }
    const double wt = (k == 0 || k + 1 == nt) ? 0.5 * dt_rec : dt_rec;
    g[k] = -2.0 * acc * wt;
  }
  return g;
}

ControlOptResult optimize_control(const SampledPulse& e_in, const MediumParams& m, double tau,
                                  const SolverGrid& grid, const ControlOptOptions& opts) {
  m.validate();
  grid.validate();
  if (!(energy(e_in) > 0.0)) throw DegenerateInputError("optimize_control needs a nonzero input");
  if (tau < 0.0) throw ParameterError("tau must be >= 0");

  const double span = e_in.t_end - e_in.t_start;
  const double Teff = effective_duration(e_in);
  double om_init = std::sqrt(opts.duration_match * m.alpha_L * m.gamma / (2.0 * Teff));
  const double cap = opts.max_rabi > 0.0 ? opts.max_rabi : 4.0 * om_init;
  if (!(cap > 0.0)) throw ParameterError("max_rabi cap must be > 0");
  om_init = std::min(om_init, cap);

  const double om_r = opts.retrieval_rabi > 0.0 ? opts.retrieval_rabi : internal_rabi(m);
  const double Tr = completion_window_us(m, om_r);
  const auto n_read = std::size_t(std::ceil(Tr * grid.nt_per_us)) + 1;
  const SampledPulse omega_read = constant_pulse(tau, tau + Tr, om_r, n_read);

  // control parametrized on the solver's writing grid
  const auto nsteps = std::size_t(std::ceil(span * grid.nt_per_us - 1e-9));
  const std::size_t nt = std::max<std::size_t>(nsteps, 2) + 1;
  auto make_control = [&](const std::vector<double>& vals) {
    std::vector<cxd> s(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) s[i] = vals[i];
    return SampledPulse(e_in.t_start, e_in.t_end, std::move(s));
  };
  auto eta_of = [&](const std::vector<double>& vals) {
    const SpinWave S_T = propagate(e_in, make_control(vals), m, SpinWave{}, grid).s_final;
    const SpinWave S_tau = spin_scale(S_T, cxd{std::exp(-m.gamma_s * tau), 0.0});
    return energy(retrieve(S_tau, omega_read, m, grid)) / energy(e_in);
  };

  std::vector<double> om(nt, om_init);
  double eta = eta_of(om);
  ControlOptResult res;

  double step = 0.0;
  int no_progress = 0;
  int iters = 0;
  for (int it = 0; it < opts.max_ascent_iters; ++it) {
    iters = it + 1;
    const std::vector<double> g =
        control_gradient(e_in, make_control(om), omega_read, tau, m, grid, nullptr);
    double gmax = 0.0;
    for (double v : g) gmax = std::max(gmax, std::abs(v));
    if (step == 0.0) step = 0.1 * om_init / (gmax + 1e-300);

    bool improved = false;
    double eta_new = eta;
    for (int tries = 0; tries < 30; ++tries) {
      std::vector<double> om2(nt);
      for (std::size_t i = 0; i < nt; ++i)
        om2[i] = std::clamp(om[i] + step * g[i], 0.0, cap);
      eta_new = eta_of(om2);
      if (eta_new > eta) {
        om = std::move(om2);
        improved = true;
        step *= 1.3;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
    if ((eta_new - eta) / std::max(eta, 1e-12) < opts.stall_rel_gain) {
      if (++no_progress >= opts.patience) {
        eta = eta_new;
        break;
      }
    } else {
      no_progress = 0;
    }
    eta = eta_new;
  }

  res.omega_write = make_control(om);
  res.achieved_eta = eta;
  res.ascent_iters = iters;
  res.target_eta = optimal_spin_wave(m, grid).eta_max * storage_decay_factor(m, tau);
  res.at_optimum = res.achieved_eta >= res.target_eta - opts.target_tol;
  return res;
}

std::vector<ScanPoint> efficiency_vs_depth_scan(const std::vector<double>& control_powers_mW,
                                                const std::vector<double>& alpha_L_values,
                                                double gamma_s, double tau,
                                                const MediumParams& m_template,
                                                const SolverGrid& grid, int jobs) {
  if (control_powers_mW.empty() || alpha_L_values.empty())
    throw ParameterError("scan needs nonempty power and alpha_L lists");

  struct Task {
    double power, alpha_L;
  };
  std::vector<Task> tasks;
  for (double p : control_powers_mW)
    for (double a : alpha_L_values) tasks.push_back({p, a});

  std::vector<ScanPoint> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      ScanPoint pt;
      pt.power_mW = tasks[i].power;
      pt.alpha_L = tasks[i].alpha_L;
      try {
        MediumParams m = m_template;
        m.alpha_L = tasks[i].alpha_L;
        m.gamma_s = gamma_s;  // decay active in all three stages
        m.validate();
        const double rabi = rabi_from_power_mW(tasks[i].power);
        // window: 20 group delays, capped at four spin lifetimes
        double window = completion_window_us(m, rabi);
        if (gamma_s > 0.0) window = std::min(window, 2.0 / gamma_s);
        const SampledPulse seed = default_iteration_seed(m, rabi, window, grid.nt_per_us);
        const SampledPulse ctrl =
            constant_pulse(-window, 0.0, rabi, std::size_t(std::ceil(window * grid.nt_per_us)) + 1);
        const OptimizationTrace tr = iterate_signal(seed, ctrl, tau, m, grid);
        pt.eta = tr.final_efficiency;
        pt.converged = tr.converged;
        pt.iterations = int(tr.iterations.size());
        pt.ok = true;
      } catch (const std::exception& e) {
        pt.ok = false;
        pt.error = e.what();
      }
      results[i] = std::move(pt);
    }
  };

  const int nworkers = std::max(1, std::min<int>(jobs, int(tasks.size())));
  if (nworkers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(nworkers));
    for (int i = 0; i < nworkers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return results;
}

}  // namespace eitmem
