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

// Acceptance suite: every release gate runs as one numbered check printing a
// single [PASS]/[FAIL] line with the measured values. Run with a criterion
// number (1..8) or no argument for the full battery.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

#include "eitmem/optimizer.hpp"
#include "eitmem/shapes.hpp"

using namespace eitmem;

namespace {

constexpr double kTwoPi = 6.283185307179586;
constexpr double kOmega16 = kTwoPi * 6.13;

MediumParams medium(double alpha_L, double gamma_s = 0.0) {
  MediumParams m = default_medium(alpha_L);
  m.gamma_s = gamma_s;
  return m;
}

struct Check {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? " [ok]" : " [VIOLATED]");
  }
};

OptimizationTrace iterate_at(double power_mW, double alpha_L, double gamma_s, double tau,
                             const SolverGrid& grid) {
  const MediumParams m = medium(alpha_L, gamma_s);
  const double rabi = rabi_from_power_mW(power_mW);
  double window = completion_window_us(m, rabi);
  if (gamma_s > 0.0) window = std::min(window, 2.0 / gamma_s);
  const SampledPulse seed = default_iteration_seed(m, rabi, window, grid.nt_per_us);
  const SampledPulse ctrl =
      constant_pulse(-window, 0.0, rabi, std::size_t(std::ceil(window * grid.nt_per_us)) + 1);
  return iterate_signal(seed, ctrl, tau, m, grid);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

// ---- criteria ----

Check criterion1() {
  Check c;
  const SolverGrid grid;  // nz = 256
  const OptimalMode mode = optimal_spin_wave(medium(24.0), grid);
  c.require(std::abs(mode.eta_max - 0.54) <= 0.02,
            "eta_max(24) = " + num(mode.eta_max) + " within 0.54 +/- 0.02");
  c.require(mode.cycles < 30, "converged in " + std::to_string(mode.cycles) + " cycles (< 30)");
  return c;
}

Check criterion2() {
  Check c;
  const SolverGrid grid;
  const MediumParams m = medium(24.0, 1e-3);  // 1/(2 gamma_s) = 500 us
  const double factor = storage_decay_factor(m, 100.0);
  c.require(std::abs(factor - 0.819) < 1e-3, "storage factor " + num(factor) + " = 0.819");
  const double predicted = optimal_spin_wave(m, grid).eta_max * factor;
  c.require(std::abs(predicted - 0.44) <= 0.02,
            "decay-corrected optimum " + num(predicted) + " within 0.44 +/- 0.02");
  return c;
}

Check criterion3() {
  Check c;
  const SolverGrid grid{192, 100.0, SolverMode::adiabatic};
  std::vector<double> finals;
  for (double p : {8.0, 16.0, 24.0}) {
    const OptimizationTrace tr = iterate_at(p, 24.0, 0.0, 0.0, grid);
    c.require(tr.converged && tr.iterations.size() <= 6,
              num(p) + " mW converged at iteration " +
                  std::to_string(tr.iterations.size() - 1) + " (<= 5)");
    bool monotone = true;
    for (std::size_t k = 1; k < tr.iterations.size(); ++k)
      monotone = monotone &&
                 tr.iterations[k].efficiency >= tr.iterations[k - 1].efficiency - 1e-3;
    c.require(monotone, num(p) + " mW efficiency nondecreasing");
    finals.push_back(tr.final_efficiency);
  }
  for (std::size_t i = 0; i < finals.size(); ++i)
    for (std::size_t j = i + 1; j < finals.size(); ++j)
      c.require(std::abs(finals[i] - finals[j]) <= 0.02,
                "final eta " + num(finals[i]) + " vs " + num(finals[j]) + " within 0.02");
  return c;
}

Check criterion4() {
  Check c;
  const SolverGrid grid{192, 100.0, SolverMode::adiabatic};
  const OptimizationTrace tr = iterate_at(16.0, 24.0, 0.0, 0.0, grid);
  const auto& last = tr.iterations.back();
  const double window = last.input.t_end - last.input.t_start;
  const double ov = overlap(last.retrieved, shift_window(time_reverse(last.input), window));
  c.require(ov > 0.98, "overlap(retrieved, time-reversed input) = " + num(ov) + " > 0.98");
  return c;
}

Check criterion5() {
  Check c;
  const MediumParams m = medium(24.0, 1e-3);
  const double tau = 100.0;
  const SolverGrid grid{128, 50.0, SolverMode::adiabatic};

  const double c2_value = optimal_spin_wave(m, grid).eta_max * storage_decay_factor(m, tau);

  // a stronger flat level keeps retrieval short; the efficiency is unchanged
  const double om_r = 2.0 * std::sqrt(m.alpha_L * m.gamma / 15.0);
  const double Tr = completion_window_us(m, om_r);
  const SampledPulse flat_read =
      constant_pulse(tau, tau + Tr, om_r, std::size_t(std::ceil(Tr * grid.nt_per_us)) + 1);

  ControlOptOptions opts;
  opts.retrieval_rabi = om_r;
  std::vector<SampledPulse> flat_outputs;
  std::vector<SpinWave> stored;
  for (const char* name : {"rounded_step", "sinc_segment", "descending_ramp"}) {
    const SampledPulse e_in = make_shape(name, 20.0, grid.nt_per_us);
    const ControlOptResult r = optimize_control(e_in, m, tau, grid, opts);
    c.require(std::abs(r.achieved_eta - c2_value) <= 0.03,
              std::string(name) + " eta " + num(r.achieved_eta) + " within 0.03 of " +
                  num(c2_value));

    const ProtocolResult flat = run_protocol(e_in, r.omega_write, flat_read, tau, m, grid);
    flat_outputs.push_back(flat.retrieved);
    stored.push_back(flat.spin_after_write);

    const double Tw = r.omega_write.t_end - r.omega_write.t_start;
    const SampledPulse rev_read = shift_window(time_reverse(r.omega_write), tau + Tw);
    const ProtocolResult rev = run_protocol(e_in, r.omega_write, rev_read, tau, m, grid);
    const double ov =
        overlap(rev.retrieved, shift_window(time_reverse(e_in), tau + Tw));
    c.require(ov > 0.98,
              std::string(name) + " reversed-control output vs reversed input " + num(ov) +
                  " > 0.98");
  }
  for (std::size_t i = 0; i < flat_outputs.size(); ++i)
    for (std::size_t j = i + 1; j < flat_outputs.size(); ++j) {
      const double ov = overlap(flat_outputs[i], flat_outputs[j]);
      c.require(ov > 0.98, "flat-retrieval outputs " + std::to_string(i) + "," +
                               std::to_string(j) + " overlap " + num(ov) + " > 0.98");
      const double so = spin_overlap(stored[i], stored[j]);
      c.require(so > 0.98, "stored spin waves " + std::to_string(i) + "," + std::to_string(j) +
                               " overlap " + num(so) + " > 0.98");
    }
  return c;
}

Check criterion6() {
  Check c;
  const MediumParams m = medium(24.0);
  const SolverGrid grid{128, 50.0, SolverMode::adiabatic};
  const OptimizationTrace tr = iterate_at(16.0, 24.0, 0.0, 0.0, grid);

  // crop the converged input to its energy support before re-optimizing
  const SampledPulse e_star = tr.final_input;
  double cum = 0.0;
  const double total = energy(e_star);
  double t_lo = e_star.t_start;
  for (std::size_t i = 1; i < e_star.size(); ++i) {
    cum += 0.5 * e_star.dt() *
           (std::norm(e_star.samples[i - 1]) + std::norm(e_star.samples[i]));
    if (cum > 1e-3 * total) {
      t_lo = e_star.time_at(i);
      break;
    }
  }
  const double td = group_delay_us(kOmega16, m);
  const double w_lo = std::max(e_star.t_start, t_lo - 2.0 * td);
  const SampledPulse cropped = normalize(
      resample(e_star, std::size_t(std::ceil(-w_lo * grid.nt_per_us)) + 1, {w_lo, 0.0}));

  ControlOptOptions opts;
  opts.retrieval_rabi = 2.0 * std::sqrt(m.alpha_L * m.gamma / 15.0);
  const ControlOptResult r = optimize_control(cropped, m, 0.0, grid, opts);
  const SampledPulse flat_ref = constant_pulse(w_lo, 0.0, kOmega16, cropped.size());
  const double ov = overlap(r.omega_write, flat_ref);
  c.require(ov > 0.95,
            "synthesized control vs original constant control overlap " + num(ov) + " > 0.95");
  c.require(std::abs(r.achieved_eta - tr.final_efficiency) <= 0.01,
            "eta " + num(r.achieved_eta) + " equals iterated " + num(tr.final_efficiency) +
                " within 0.01");
  return c;
}

Check criterion7() {
  Check c;
  const SolverGrid grid{128, 50.0, SolverMode::adiabatic};
  const std::vector<double> powers{0.75, 1.5, 3.0};
  const std::vector<double> alphas{6.0, 12.0, 18.0, 24.0, 32.0, 40.0, 50.0, 60.0, 74.0, 88.0};
  const int jobs = std::max(2u, std::thread::hardware_concurrency());
  const auto pts =
      efficiency_vs_depth_scan(powers, alphas, 1e-3, 100.0, medium(24.0), grid, jobs);

  std::vector<double> peak_alpha;
  for (double p : powers) {
    std::vector<double> eta;
    for (const auto& pt : pts)
      if (pt.power_mW == p) {
        if (!pt.ok) {
          c.require(false, "point failed: " + pt.error);
          return c;
        }
        eta.push_back(pt.eta);
      }
    const auto kmax = std::size_t(std::max_element(eta.begin(), eta.end()) - eta.begin());
    c.require(kmax > 0 && kmax + 1 < eta.size(),
              num(p) + " mW peak at depth " + num(alphas[kmax]) + " is interior");
    bool unimodal = true;
    for (std::size_t k = 0; k + 1 < eta.size(); ++k) {
      if (k < kmax) unimodal = unimodal && eta[k + 1] >= eta[k] - 1e-3;
      else unimodal = unimodal && eta[k + 1] <= eta[k] + 1e-3;
    }
    c.require(unimodal, num(p) + " mW curve rises then falls (1e-3 slack)");
    peak_alpha.push_back(alphas[kmax]);
  }
  for (std::size_t i = 0; i + 1 < peak_alpha.size(); ++i)
    c.require(peak_alpha[i] < peak_alpha[i + 1],
              "peak depth " + num(peak_alpha[i]) + " < " + num(peak_alpha[i + 1]) +
                  " (ordered by power)");
  return c;
}

Check criterion8() {
  Check c;
  // (a) resonant transmission without control
  for (double aL : {4.0, 10.0}) {
    for (SolverMode mode : {SolverMode::adiabatic, SolverMode::full}) {
      MediumParams m = medium(aL);
      SolverGrid grid{256, 50.0, mode};
      const double T = 40.0;
      const auto n = std::size_t(T * grid.nt_per_us) + 1;
      std::vector<cxd> s(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double t = -T + T * double(i) / double(n - 1);
        const double x = std::clamp((t + T) / 5.0, 0.0, 1.0);
        s[i] = x * x * (3.0 - 2.0 * x);
      }
      const SampledPulse e_in(-T, 0.0, std::move(s));
      const auto res = propagate(e_in, constant_pulse(-T, 0.0, 0.0, 2), m, SpinWave{}, grid);
      const double trans = std::norm(res.e_out.samples.back());
      c.require(std::abs(trans - std::exp(-aL)) / std::exp(-aL) < 0.01,
                "transmission(" + num(aL) + (mode == SolverMode::full ? ", full" : ", adiab") +
                    ") = " + num(trans / std::exp(-aL)) + " x Beer-Lambert");
    }
  }
  // (b) group delay of a narrowband pulse
  {
    MediumParams m = medium(24.0);
    SolverGrid grid;
    const auto n = std::size_t(120.0 * grid.nt_per_us) + 1;
    std::vector<cxd> s(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = -120.0 + 120.0 * double(i) / double(n - 1);
      s[i] = std::exp(-0.25 * std::pow((t + 60.0) / 20.0, 2));
    }
    const SampledPulse e_in(-120.0, 0.0, std::move(s));
    const auto res =
        propagate(e_in, constant_pulse(-120.0, 0.0, kOmega16, n), m, SpinWave{}, grid);
    auto centroid = [](const SampledPulse& p) {
      double nm = 0.0, dn = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        nm += std::norm(p.samples[i]) * p.time_at(i);
        dn += std::norm(p.samples[i]);
      }
      return nm / dn;
    };
    const double delay = centroid(res.e_out) - centroid(e_in);
    const double expected = group_delay_us(kOmega16, m);
    c.require(std::abs(delay - expected) / expected < 0.10,
              "group delay " + num(delay) + " us vs L/v_g " + num(expected) + " us (10%)");
  }
  // (c) adiabatic vs full protocol efficiency, T alpha_L gamma > 1e4
  {
    MediumParams m = medium(6.0);
    const double Tw = 10.0, tau = 0.5, om_w = 25.0, om_r = 80.0;
    const double Tr = completion_window_us(m, om_r);
    auto eta_mode = [&](SolverMode mode) {
      SolverGrid grid{128, 100.0, mode};
      const auto n = std::size_t(Tw * grid.nt_per_us) + 1;
      std::vector<cxd> s(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double t = -Tw + Tw * double(i) / double(n - 1);
        s[i] = std::exp(-0.25 * std::pow((t + 4.5) / 1.1, 2));
      }
      const SampledPulse e_in(-Tw, 0.0, std::move(s));
      const SampledPulse wc = constant_pulse(-Tw, 0.0, om_w, n);
      const SampledPulse rc =
          constant_pulse(tau, tau + Tr, om_r, std::size_t(Tr * grid.nt_per_us) + 1);
      return run_protocol(e_in, wc, rc, tau, m, grid).efficiency;
    };
    const double ea = eta_mode(SolverMode::adiabatic);
    const double ef = eta_mode(SolverMode::full);
    c.require(std::abs(ea - ef) / ef < 0.01,
              "adiabatic eta " + num(ea) + " vs full " + num(ef) + " (1% rel)");
  }
  // (d) dense-operator oracle vs power iteration
  for (double aL : {6.0, 24.0}) {
    const SolverGrid grid{48, 50.0, SolverMode::adiabatic};
    const MediumParams m = medium(aL);
    const double om0 = std::sqrt(m.alpha_L * m.gamma / 15.0);
    const double Tr = completion_window_us(m, om0);
    const auto nc = std::size_t(std::ceil(Tr * grid.nt_per_us)) + 1;
    const SampledPulse ctrl_r = constant_pulse(0.0, Tr, om0, nc);
    const SampledPulse ctrl_w = constant_pulse(-Tr, 0.0, om0, nc);
    Eigen::MatrixXcd A(grid.nz, grid.nz);
    for (int j = 0; j < grid.nz; ++j) {
      SpinWave e = SpinWave::zero(std::size_t(grid.nz));
      e.samples[std::size_t(j)] = 1.0;
      const SampledPulse out = retrieve(e, ctrl_r, m, grid);
      const SpinWave col =
          propagate(shift_window(time_reverse(out), -Tr), ctrl_w, m, SpinWave{}, grid).s_final;
      for (int i = 0; i < grid.nz; ++i) A(i, j) = col.samples[std::size_t(i)];
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
    double lam1 = 0.0;
    for (int i = 0; i < grid.nz; ++i) lam1 = std::max(lam1, std::abs(es.eigenvalues()[i]));
    const double eta_pow = optimal_spin_wave(m, grid).eta_max;
    c.require(std::abs(eta_pow - lam1 * lam1) < 1e-3,
              "power-iteration eta " + num(eta_pow) + " vs dense dominant-eigenvalue " +
                  num(lam1 * lam1) + " at depth " + num(aL) + " (1e-3)");
  }
  return c;
}

const char* kDescriptions[9] = {
    "",
    "decay-free optimum at depth 24",
    "decay-corrected optimum",
    "iterative convergence across control powers",
    "time-reversal fixed point",
    "control synthesis verification on three input shapes",
    "cross-protocol consistency",
    "efficiency-vs-depth peaks under spin decay",
    "physics oracles (absorption, delay, full-solver agreement, dense operator)",
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  if (argc > 1) {
    which.push_back(std::atoi(argv[1]));
  } else {
    for (int i = 1; i <= 8; ++i) which.push_back(i);
  }
  Check (*runners[9])() = {nullptr,     criterion1, criterion2, criterion3, criterion4,
                           criterion5, criterion6, criterion7, criterion8};
  bool all_pass = true;
  for (int i : which) {
    if (i < 1 || i > 8) {
      std::fprintf(stderr, "unknown criterion %d\n", i);
      return 2;
    }
    Check c;
    try {
      c = runners[i]();
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s — %s\n", c.pass ? "PASS" : "FAIL", i, kDescriptions[i],
                c.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && c.pass;
  }
  return all_pass ? 0 : 1;
}
