#pragma once

// Reduced qubit dynamics: per-mode evolution operators, the weighted-unitary
// channel at time t, trajectory evaluation, and the closed-form special cases.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "qsb/errors.hpp"
#include "qsb/mat2.hpp"
#include "qsb/model.hpp"
#include "qsb/spectrum.hpp"

namespace qsb {

enum class SpectrumPath { enumerate, hamming, automatic };

struct ChannelElement {
  double weight = 0.0;
  Mat2 U = Mat2::identity();
};

// A random-unitary channel followed by the frame rotation V_t:
//   rho -> V_t (sum_i w_i U_i rho U_i^dag) V_t^dag.
struct QubitChannel {
  std::vector<ChannelElement> elements;
  Mat2 frame_rotation = Mat2::identity();

  double total_weight() const {
    double s = 0.0;
    for (const ChannelElement& e : elements) s += e.weight;
    return s;
  }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix2> states;
  std::map<std::string, std::vector<double>> scalars;
};

// V_t = diag(e^{-i w t / 2}, e^{+i w t / 2})
inline Mat2 frame_rotation(double t, double omega_drive) {
  const double h = 0.5 * omega_drive * t;
  return Mat2::diagonal(std::polar(1.0, -h), std::polar(1.0, h));
}

// Generator of one mode's evolution: [[E - w/2, alpha], [alpha, -(E - w/2)]].
inline Mat2 mode_hamiltonian(double E, double omega_drive, double alpha) {
  const double d = E - 0.5 * omega_drive;
  return {cplx(d, 0.0), cplx(alpha, 0.0), cplx(alpha, 0.0), cplx(-d, 0.0)};
}

// U_i(t) = e^{-i Omega_i t} exp(-i [[E, a],[a, -E]] t). The similarity-
// transformed diagonal phases of the mode collapse to this closed form; the
// explicit (1+f^2)^-1 mixed representation is algebraically identical and kept
// as a test reference.
inline Mat2 mode_unitary(const Mode& m, double t, double alpha) {
  const double r = std::hypot(m.E, alpha);
  const double c = std::cos(r * t);
  const double s = r == 0.0 ? t : std::sin(r * t) / r;
  const cplx phase = std::polar(1.0, -m.Omega * t);
  const cplx diag(c, -s * m.E);
  const cplx off(0.0, -s * alpha);
  return {phase * diag, phase * off, phase * off, phase * std::conj(diag)};
}

inline SpectrumPath resolve_path(const ModelParams& p, SpectrumPath path) {
  if (path != SpectrumPath::automatic) return path;
  return (p.is_uniform() && p.N > 12) ? SpectrumPath::hamming : SpectrumPath::enumerate;
}

// The spectrum the channel is built from. This is the one place the
// rotating-frame substitution beta -> beta - omega/2 happens; spectra built
// anywhere else use the raw beta.
inline ModeSpectrum channel_spectrum(const ModelParams& p, SpectrumPath path = SpectrumPath::automatic) {
  const double beta_eff = p.beta - 0.5 * p.omega_drive;
  return resolve_path(p, path) == SpectrumPath::hamming ? hamming_spectrum(p, beta_eff)
                                                        : bath_spectrum(p, beta_eff);
}

// spectrum must come from channel_spectrum (beta_eff baked in).
inline QubitChannel build_channel(double t, const ModelParams& p, const ModeSpectrum& spectrum) {
  QubitChannel ch;
  ch.frame_rotation = frame_rotation(t, p.omega_drive);
  ch.elements.reserve(spectrum.modes.size());
  for (const Mode& m : spectrum.modes)
    ch.elements.push_back({m.weight, mode_unitary(m, t, p.alpha)});
  return ch;
}

inline QubitChannel build_channel(double t, const ModelParams& p,
                                  SpectrumPath path = SpectrumPath::automatic) {
  p.validate();
  return build_channel(t, p, channel_spectrum(p, path));
}

// eta_t = V_t (sum_i w_i U_i rho0 U_i^dag) V_t^dag, accumulated in a fixed
// mode order so results are bitwise reproducible.
inline DensityMatrix2 apply_channel(const QubitChannel& ch, const DensityMatrix2& rho0) {
  Mat2 acc;
  for (const ChannelElement& e : ch.elements) {
    if (e.weight == 0.0) continue;
    acc = acc + e.weight * (e.U * rho0.matrix() * adjoint(e.U));
  }
  const Mat2& v = ch.frame_rotation;
  return DensityMatrix2(v * acc * adjoint(v));
}

// Equally spaced grid including both endpoints; steps == 1 gives {t0}.
inline std::vector<double> time_grid(double t0, double t1, int steps) {
  if (steps < 1) throw contract_error("time_grid: steps must be >= 1");
  if (!std::isfinite(t0) || !std::isfinite(t1)) throw contract_error("time_grid: non-finite endpoint");
  if (steps == 1) return {t0};
  if (t1 <= t0) throw contract_error("time_grid: t_end must exceed t_start");
  std::vector<double> ts(static_cast<std::size_t>(steps));
  const double dt = (t1 - t0) / static_cast<double>(steps - 1);
  for (int i = 0; i < steps; ++i) ts[static_cast<std::size_t>(i)] = t0 + dt * i;
  ts.back() = t1;
  return ts;
}

// States over the grid via one channel per time point (the Kraus family is an
// explicit function of t, not a semigroup). The spectrum is built once.
inline Trajectory evolve(const ModelParams& p, const DensityMatrix2& rho0,
                         const std::vector<double>& times,
                         SpectrumPath path = SpectrumPath::automatic) {
  p.validate();
  if (times.empty()) throw contract_error("evolve: empty time grid");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) throw contract_error("evolve: non-finite time");
    if (i > 0 && times[i] <= times[i - 1])
      throw contract_error("evolve: times must be strictly increasing");
  }
  const ModeSpectrum spectrum = channel_spectrum(p, path);
  Trajectory out;
  out.times = times;
  out.states.reserve(times.size());
  std::vector<double>& coh = out.scalars["coherence"];
  std::vector<double>& pur = out.scalars["purity"];
  coh.reserve(times.size());
  pur.reserve(times.size());
  for (double t : times) {
    DensityMatrix2 st = apply_channel(build_channel(t, p, spectrum), rho0);
    coh.push_back(st.coherence());
    pur.push_back(st.purity());
    out.states.push_back(st);
  }
  return out;
}

// sum_i rho_i e^{-2 i E_i t} with E_i built at the raw beta: the multiplier
// eta_12(t)/eta_12(0) in the alpha = 0 (pure dephasing) case, where it is
// independent of the drive rotation. |result| <= 1 always.
inline cplx dephasing_factor(double t, const ModelParams& p) {
  p.validate();
  const ModeSpectrum s =
      p.is_uniform() ? hamming_spectrum(p, p.beta) : bath_spectrum(p, p.beta);
  double re = 0.0, im = 0.0;
  for (const Mode& m : s.modes) {
    re += m.weight * std::cos(2.0 * m.E * t);
    im -= m.weight * std::sin(2.0 * m.E * t);
  }
  return {re, im};
}

// Uncoupled-qubit evolution U(t) = V_t exp(-i H t),
// H = [[beta_eff, alpha], [alpha, -beta_eff]]; requires all couplings zero.
inline Mat2 closed_evolution(double t, const ModelParams& p) {
  p.validate();
  for (double g : p.g_n)
    if (g != 0.0) throw contract_error("closed_evolution: couplings must all vanish");
  const double beta_eff = p.beta - 0.5 * p.omega_drive;
  const Mat2 h{cplx(beta_eff, 0.0), cplx(p.alpha, 0.0), cplx(p.alpha, 0.0), cplx(-beta_eff, 0.0)};
  return frame_rotation(t, p.omega_drive) * herm2_exp(h, t);
}

}  // namespace qsb
