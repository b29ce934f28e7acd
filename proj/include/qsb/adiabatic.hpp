#pragma once

// Adiabatic-following diagnostics for the driven qubit: instantaneous
// eigenstates, the closed-system fidelity formula, its open-system
// generalization over Hamming classes, and the channel-based cross-check.

#include <cmath>

#include "qsb/dynamics.hpp"
#include "qsb/errors.hpp"
#include "qsb/mat2.hpp"
#include "qsb/model.hpp"

namespace qsb {

inline constexpr double kHalfPi = 1.5707963267948966;

// Drive written as alpha = beta0 sin(phi), beta = beta0 cos(phi) with the
// dimensionless rotation rate x = omega / (2 beta0).
struct AdiabaticConfig {
  double beta0 = 1.0;
  double phi = kHalfPi;
  double x = 0.0;
  ModelParams bath;

  static AdiabaticConfig make(double beta0, double phi, double x, int n_bath,
                              double bath_omega, double g, double theta) {
    if (!(beta0 > 0.0)) throw contract_error("AdiabaticConfig: beta0 must be positive");
    AdiabaticConfig cfg;
    cfg.beta0 = beta0;
    cfg.phi = phi;
    cfg.x = x;
    cfg.bath = ModelParams::uniform(n_bath, bath_omega, g);
    cfg.bath.alpha = beta0 * std::sin(phi);
    cfg.bath.beta = beta0 * std::cos(phi);
    cfg.bath.omega_drive = 2.0 * x * beta0;
    cfg.bath.theta = theta;
    cfg.bath.validate();
    return cfg;
  }

  static AdiabaticConfig from_params(const ModelParams& p) {
    p.validate();
    const double beta0 = std::hypot(p.alpha, p.beta);
    if (!(beta0 > 0.0))
      throw contract_error("AdiabaticConfig: alpha = beta = 0 leaves no field direction");
    AdiabaticConfig cfg;
    cfg.beta0 = beta0;
    cfg.phi = std::atan2(p.alpha, p.beta);
    cfg.x = p.omega_drive / (2.0 * beta0);
    cfg.bath = p;
    return cfg;
  }
};

// |psi_t^+><psi_t^+| for |psi_t^+> = (cos(phi/2), e^{i w t} sin(phi/2)):
// the instantaneous +beta0 eigenstate; equals V_t times the t = 0 projector.
inline DensityMatrix2 eigenstate_plus(double phi, double omega_t) {
  const double c = std::cos(0.5 * phi);
  const double s = std::sin(0.5 * phi);
  const cplx off = c * s * std::polar(1.0, -omega_t);
  return DensityMatrix2{{cplx(c * c, 0.0), off, std::conj(off), cplx(s * s, 0.0)}};
}

namespace detail {

inline void require_equatorial(double phi, const char* who) {
  if (std::abs(phi - kHalfPi) > 1e-12)
    throw contract_error(std::string(who) + ": closed form holds at phi = pi/2 only; use fidelity_via_channel");
}

// 1 - (y^2/(1+y^2)) sin^2(beta0 sqrt(1+y^2) t), overflow-safe in y.
inline double mode_fidelity(double y, double beta0, double t) {
  const double y2 = y * y;
  const double amp = std::isinf(y2) ? 1.0 : y2 / (1.0 + y2);
  const double sn = std::sin(beta0 * std::hypot(1.0, y) * t);
  return 1.0 - amp * sn * sn;
}

}  // namespace detail

// F(t) = 1 - (x^2/(1+x^2)) sin^2(beta0 sqrt(1+x^2) t) for the uncoupled qubit.
inline double closed_fidelity(double t, const AdiabaticConfig& cfg) {
  detail::require_equatorial(cfg.phi, "closed_fidelity");
  return detail::mode_fidelity(-cfg.x, cfg.beta0, t);
}

// F(t) = 1 - R(t), R(t) = sum_k C(N,k) rho_k (x_k^2/(1+x_k^2)) sin^2(...),
// x_k = g(N-2k)/beta0 - x. Class masses are the log-space Hamming weights.
inline double open_fidelity(double t, const AdiabaticConfig& cfg) {
  detail::require_equatorial(cfg.phi, "open_fidelity");
  if (!cfg.bath.is_uniform())
    throw contract_error("open_fidelity: bath must be uniform; use fidelity_via_channel");
  const ModeSpectrum s = hamming_spectrum(cfg.bath, 0.0);
  const double g = cfg.bath.g_n.front();
  double r = 0.0;
  for (int k = 0; k <= cfg.bath.N; ++k) {
    const Mode& m = s.modes[static_cast<std::size_t>(k)];
    const double xk = g * static_cast<double>(cfg.bath.N - 2 * k) / cfg.beta0 - cfg.x;
    r += m.weight * (1.0 - detail::mode_fidelity(xk, cfg.beta0, t));
  }
  return 1.0 - r;
}

// Tr(T_t(rho_+(0)) rho_+(t)) computed through the channel; valid for any phi
// and any bath the dynamics accepts.
inline double fidelity_via_channel(double t, const AdiabaticConfig& cfg,
                                   SpectrumPath path = SpectrumPath::automatic) {
  const DensityMatrix2 evolved =
      apply_channel(build_channel(t, cfg.bath, path), eigenstate_plus(cfg.phi, 0.0));
  return fidelity(evolved, eigenstate_plus(cfg.phi, cfg.bath.omega_drive * t));
}

}  // namespace qsb
