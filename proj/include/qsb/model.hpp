#pragma once

#include <cmath>
#include <vector>

#include "qsb/errors.hpp"

namespace qsb {

// Physical configuration: N bath spins with frequencies omega_n and couplings
// g_n, the drive amplitudes (alpha transverse, beta longitudinal), the field
// rotation frequency omega_drive, and the inverse temperature theta = 1/kT.
// Units: hbar = k_B = 1. theta = 0 is infinite temperature, theta = +inf is T = 0.
struct ModelParams {
  int N = 1;
  std::vector<double> omega_n;
  std::vector<double> g_n;
  double alpha = 0.0;
  double beta = 0.0;
  double omega_drive = 0.0;
  double theta = 0.0;

  static ModelParams uniform(int n, double omega, double g) {
    ModelParams p;
    p.N = n;
    p.omega_n.assign(static_cast<std::size_t>(std::max(n, 0)), omega);
    p.g_n.assign(static_cast<std::size_t>(std::max(n, 0)), g);
    return p;
  }

  bool is_uniform() const {
    for (double w : omega_n)
      if (w != omega_n.front()) return false;
    for (double g : g_n)
      if (g != g_n.front()) return false;
    return true;
  }

  void validate() const {
    if (N < 1) throw contract_error("ModelParams: N must be >= 1");
    if (omega_n.size() != static_cast<std::size_t>(N) ||
        g_n.size() != static_cast<std::size_t>(N))
      throw contract_error("ModelParams: omega_n and g_n must have length N");
    for (double w : omega_n)
      if (!std::isfinite(w)) throw contract_error("ModelParams: non-finite bath frequency");
    for (double g : g_n)
      if (!std::isfinite(g)) throw contract_error("ModelParams: non-finite coupling");
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(omega_drive))
      throw contract_error("ModelParams: non-finite drive parameter");
    if (std::isnan(theta) || theta < 0.0)
      throw contract_error("ModelParams: theta must lie in [0, +inf]");
  }
};

}  // namespace qsb
