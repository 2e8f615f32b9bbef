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

#include "eitmem/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eitmem/errors.hpp"

namespace eitmem {

namespace {

constexpr cxd kI{0.0, 1.0};

struct UphillWeights {
  // dE/du = -A E - B S with S piecewise linear across a cell of width h:
  // E_{j+1} = f E_j - B (w0 S_j + w1 S_{j+1}); exact for the exponential part.
  double f, w0, w1;
};

UphillWeights sweep_weights(double A, double h) {
  const double x = A * h;
  UphillWeights w;
  w.f = std::exp(-x);
  if (x > 1e-4) {
    w.w0 = (1.0 - (1.0 + x) * w.f) / (A * A * h);
    w.w1 = (1.0 - w.f) / A - w.w0;
  } else {
    w.w0 = h * (0.5 - x / 3.0 + x * x / 8.0);
    w.w1 = h * (0.5 - x / 6.0 + x * x / 24.0);
  }
  return w;
}

// E(u) for the adiabatic field equation at fixed t.
void sweep_field(const std::vector<cxd>& S, cxd ein, double B, const UphillWeights& w,
                 std::vector<cxd>& E) {
  const std::size_t nz = S.size();
  E[0] = ein;
  for (std::size_t j = 0; j + 1 < nz; ++j)
    E[j + 1] = w.f * E[j] - B * (w.w0 * S[j] + w.w1 * S[j + 1]);
}

// E(u) = ein + iC * cumtrapz(P) for the full-mode field equation.
void quad_field(const std::vector<cxd>& P, cxd ein, double C, double du, std::vector<cxd>& E) {
  const std::size_t nz = P.size();
  cxd acc{0.0, 0.0};
  E[0] = ein;
  for (std::size_t j = 0; j + 1 < nz; ++j) {
    acc += 0.5 * du * (P[j] + P[j + 1]);
    E[j + 1] = ein + kI * C * acc;
  }
}

void check_finite(const std::vector<cxd>& S, std::size_t step, double t) {
  for (const auto& v : S) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericalError("integration diverged at step " + std::to_string(step) + " (t = " +
                           std::to_string(t) + " us); refine the grid or check parameters");
  }
}

// Control/input amplitudes at step and half-step times (2*nt-1 points).
std::vector<cxd> half_grid(const SampledPulse& p, double t0, double t1, std::size_t nt) {
  std::vector<cxd> out(2 * nt - 1);
  const double h = (t1 - t0) / double(2 * nt - 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = p.value_at(t0 + h * double(i));
  return out;
}

}  // namespace

void SolverGrid::validate() const {
  if (nz < 32) throw ParameterError("SolverGrid.nz must be >= 32");
  if (!(nt_per_us > 0.0)) throw ParameterError("SolverGrid.nt_per_us must be > 0");
}

double completion_window_us(const MediumParams& m, double rabi) {
  if (!(rabi > 0.0)) throw ParameterError("completion window requires Omega > 0");
  return 10.0 * m.alpha_L * m.gamma / (rabi * rabi);
}

PropagateResult propagate(const SampledPulse& e_in, const SampledPulse& control,
                          const MediumParams& m, const SpinWave& s0, const SolverGrid& grid,
                          FieldRecord* record, PolarizationField* polarization) {
  m.validate();
  grid.validate();
  e_in.validate();
  control.validate();
  const double span = e_in.t_end - e_in.t_start;
  if (std::abs(e_in.t_start - control.t_start) > 1e-9 * std::max(1.0, span) ||
      std::abs(e_in.t_end - control.t_end) > 1e-9 * std::max(1.0, span))
    throw ParameterError("signal and control windows must coincide");

  const std::size_t nz = std::size_t(grid.nz);
  const double du = 1.0 / double(nz - 1);
  const double C = std::sqrt(m.gamma * m.alpha_L * 0.5);
  const double A = 0.5 * m.alpha_L;

  std::size_t nsteps = std::size_t(std::ceil(span * grid.nt_per_us - 1e-9));
  if (grid.mode == SolverMode::full)
    nsteps = std::max(nsteps, std::size_t(std::ceil(span * m.gamma / 0.1)));
  nsteps = std::max<std::size_t>(nsteps, 2);
  const std::size_t nt = nsteps + 1;
  const double dt = span / double(nsteps);

  // initial spin wave, resampled onto the solver grid if needed
  std::vector<cxd> S(nz, cxd{0.0, 0.0});
  if (!s0.samples.empty()) {
    s0.validate();
    if (s0.size() == nz) {
      S = s0.samples;
    } else {
      const double h0 = s0.dz();
      for (std::size_t j = 0; j < nz; ++j) {
        const double z = du * double(j);
        const double x = z / h0;
        const auto i = std::min<std::size_t>(std::size_t(x), s0.size() - 2);
        const double f = x - double(i);
        S[j] = s0.samples[i] * (1.0 - f) + s0.samples[i + 1] * f;
      }
    }
  }

  const std::vector<cxd> ein_h = half_grid(e_in, e_in.t_start, e_in.t_end, nt);
  const std::vector<cxd> om_h = half_grid(control, e_in.t_start, e_in.t_end, nt);

  std::vector<cxd> eout(nt);
  std::vector<cxd> E(nz), k1(nz), k2(nz), k3(nz), k4(nz), tmp(nz);
  const UphillWeights uw = sweep_weights(A, du);

  if (record) {
    record->nt = nt;
    record->nz = nz;
    record->times.resize(nt);
    record->S.assign(nt * nz, cxd{});
    record->E.assign(nt * nz, cxd{});
    for (std::size_t k = 0; k < nt; ++k) record->times[k] = e_in.t_start + dt * double(k);
  }

  auto capture_polarization = [&](std::size_t k, const std::vector<cxd>& Evec) {
    if (!polarization) return;
    if (k % std::size_t(std::max(1, polarization->stride)) != 0) return;
    const double om = om_h[2 * k].real();
    std::vector<cxd> P(nz);
    for (std::size_t j = 0; j < nz; ++j)
      P[j] = kI * (C * Evec[j] + om * S[j]) / m.gamma;
    polarization->times.push_back(e_in.t_start + dt * double(k));
    polarization->snapshots.push_back(std::move(P));
  };

  if (grid.mode == SolverMode::adiabatic) {
    auto deriv = [&](const std::vector<cxd>& Sc, cxd ein, double om, std::vector<cxd>& dS,
                     std::vector<cxd>& Efield) {
      const double B = C * om / m.gamma;
      const double G = m.gamma_s + om * om / m.gamma;
      sweep_field(Sc, ein, B, uw, Efield);
      for (std::size_t j = 0; j < Sc.size(); ++j) dS[j] = -G * Sc[j] - B * Efield[j];
    };
    for (std::size_t k = 0; k + 1 < nt; ++k) {
      const double om1 = om_h[2 * k].real(), om2 = om_h[2 * k + 1].real(),
                   om3 = om_h[2 * k + 2].real();
      deriv(S, ein_h[2 * k], om1, k1, E);
      eout[k] = E[nz - 1];
      if (record) {
        std::copy(S.begin(), S.end(), record->S.begin() + std::ptrdiff_t(k * nz));
        std::copy(E.begin(), E.end(), record->E.begin() + std::ptrdiff_t(k * nz));
      }
      capture_polarization(k, E);
      for (std::size_t j = 0; j < nz; ++j) tmp[j] = S[j] + 0.5 * dt * k1[j];
      deriv(tmp, ein_h[2 * k + 1], om2, k2, E);
      for (std::size_t j = 0; j < nz; ++j) tmp[j] = S[j] + 0.5 * dt * k2[j];
      deriv(tmp, ein_h[2 * k + 1], om2, k3, E);
      for (std::size_t j = 0; j < nz; ++j) tmp[j] = S[j] + dt * k3[j];
      deriv(tmp, ein_h[2 * k + 2], om3, k4, E);
      for (std::size_t j = 0; j < nz; ++j)
        S[j] += (dt / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
      if ((k & 511u) == 0) check_finite(S, k, e_in.t_start + dt * double(k));
    }
    {
      const double om = om_h[2 * nt - 2].real();
      sweep_field(S, ein_h[2 * nt - 2], C * om / m.gamma, uw, E);
      eout[nt - 1] = E[nz - 1];
      if (record) {
        std::copy(S.begin(), S.end(), record->S.begin() + std::ptrdiff_t((nt - 1) * nz));
        std::copy(E.begin(), E.end(), record->E.begin() + std::ptrdiff_t((nt - 1) * nz));
      }
      capture_polarization(nt - 1, E);
    }
    check_finite(S, nt - 1, e_in.t_end);
  } else {
    // full mode: state (P,S)
    std::vector<cxd> P(nz, cxd{0.0, 0.0});
    std::vector<cxd> kp1(nz), kp2(nz), kp3(nz), kp4(nz), tmpP(nz);
    auto deriv = [&](const std::vector<cxd>& Pc, const std::vector<cxd>& Sc, cxd ein, double om,
                     std::vector<cxd>& dP, std::vector<cxd>& dS, std::vector<cxd>& Efield) {
      quad_field(Pc, ein, C, du, Efield);
      for (std::size_t j = 0; j < Pc.size(); ++j) {
        dP[j] = -m.gamma * Pc[j] + kI * (C * Efield[j] + om * Sc[j]);
        dS[j] = -m.gamma_s * Sc[j] + kI * om * Pc[j];
      }
    };
    for (std::size_t k = 0; k + 1 < nt; ++k) {
      const double om1 = om_h[2 * k].real(), om2 = om_h[2 * k + 1].real(),
                   om3 = om_h[2 * k + 2].real();
      deriv(P, S, ein_h[2 * k], om1, kp1, k1, E);
      eout[k] = E[nz - 1];
      if (record) {
        std::copy(S.begin(), S.end(), record->S.begin() + std::ptrdiff_t(k * nz));
        std::copy(E.begin(), E.end(), record->E.begin() + std::ptrdiff_t(k * nz));
      }
      if (polarization && k % std::size_t(std::max(1, polarization->stride)) == 0) {
        polarization->times.push_back(e_in.t_start + dt * double(k));
        polarization->snapshots.push_back(P);
      }
      for (std::size_t j = 0; j < nz; ++j) {
        tmpP[j] = P[j] + 0.5 * dt * kp1[j];
        tmp[j] = S[j] + 0.5 * dt * k1[j];
      }
      deriv(tmpP, tmp, ein_h[2 * k + 1], om2, kp2, k2, E);
      for (std::size_t j = 0; j < nz; ++j) {
        tmpP[j] = P[j] + 0.5 * dt * kp2[j];
        tmp[j] = S[j] + 0.5 * dt * k2[j];
      }
      deriv(tmpP, tmp, ein_h[2 * k + 1], om2, kp3, k3, E);
      for (std::size_t j = 0; j < nz; ++j) {
        tmpP[j] = P[j] + dt * kp3[j];
        tmp[j] = S[j] + dt * k3[j];
      }
      deriv(tmpP, tmp, ein_h[2 * k + 2], om3, kp4, k4, E);
      for (std::size_t j = 0; j < nz; ++j) {
        P[j] += (dt / 6.0) * (kp1[j] + 2.0 * kp2[j] + 2.0 * kp3[j] + kp4[j]);
        S[j] += (dt / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
      }
      if ((k & 511u) == 0) check_finite(S, k, e_in.t_start + dt * double(k));
    }
    quad_field(P, ein_h[2 * nt - 2], C, du, E);
    eout[nt - 1] = E[nz - 1];
    if (record) {
      std::copy(S.begin(), S.end(), record->S.begin() + std::ptrdiff_t((nt - 1) * nz));
      std::copy(E.begin(), E.end(), record->E.begin() + std::ptrdiff_t((nt - 1) * nz));
    }
    check_finite(S, nt - 1, e_in.t_end);
  }

  PropagateResult res;
  res.e_out = SampledPulse(e_in.t_start, e_in.t_end, std::move(eout));
  res.s_final = SpinWave(std::move(S));
  return res;
}

SampledPulse retrieve(const SpinWave& s, const SampledPulse& control, const MediumParams& m,
                      const SolverGrid& grid) {
  control.validate();
  bool nonzero = false;
  for (const auto& v : control.samples)
    if (std::abs(v) > 0.0) nonzero = true;
  if (!nonzero) throw ParameterError("retrieval control must be nonzero somewhere");
  SampledPulse zero_in(control.t_start, control.t_end, std::vector<cxd>(2));
  return propagate(zero_in, control, m, s, grid).e_out;
}

ProtocolResult run_protocol(const SampledPulse& e_in, const SampledPulse& omega_write,
                            const SampledPulse& omega_read, double tau, const MediumParams& m,
                            const SolverGrid& grid) {
  if (tau < 0.0) throw ParameterError("storage time tau must be >= 0");
  e_in.validate();
  omega_write.validate();
  omega_read.validate();
  if (std::abs(omega_write.t_end) > 1e-6)
    throw ParameterError("writing control must end at t = 0");
  if (omega_read.t_start < tau - 1e-6 || std::abs(omega_read.t_start - tau) > 1e-6)
    throw ParameterError("retrieval control must start at t = tau");

  ProtocolResult out;
  const double e_in_energy = energy(e_in);

  auto writing = propagate(e_in, omega_write, m, SpinWave{}, grid);
  out.leak = std::move(writing.e_out);
  out.spin_after_write = std::move(writing.s_final);

  const double amp = std::exp(-m.gamma_s * tau);
  out.spin_after_storage = spin_scale(out.spin_after_write, cxd{amp, 0.0});

  out.retrieved = retrieve(out.spin_after_storage, omega_read, m, grid);

  if (e_in_energy > 0.0) {
    out.efficiency = energy(out.retrieved) / e_in_energy;
    out.leak_fraction = energy(out.leak) / e_in_energy;
    out.stored_fraction = spin_norm2(out.spin_after_write) / e_in_energy;
  }
  return out;
}

}  // namespace eitmem
