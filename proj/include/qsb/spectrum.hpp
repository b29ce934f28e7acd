#pragma once

// Bath spectra: eigenvalues E_i, Omega_i, E_i^+/- and Gibbs weights, either by
// full enumeration over the 2^N product basis or aggregated over Hamming
// classes when all frequencies and couplings are equal.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qsb/errors.hpp"
#include "qsb/model.hpp"
#include "qsb/riccati.hpp"

namespace qsb {

inline constexpr int kEnumerationMaxN = 24;
inline constexpr int kHammingMaxN = 2'000'000;

// One spectral record. For enumerated spectra a record is a single bath index
// (multiplicity 1, weight = its Gibbs weight rho_i). For Hamming spectra a
// record is a whole class (multiplicity C(N,k), weight = the class mass
// C(N,k) rho_k). Weights therefore always sum to 1 over the records.
struct Mode {
  double E = 0.0;       // eigenvalue of the coupling operator (beta included)
  double Omega = 0.0;   // bath energy eigenvalue
  double Eplus = 0.0;   // Omega + E
  double Eminus = 0.0;  // Omega - E
  double weight = 0.0;
  double multiplicity = 1.0;  // exact below 2^53, approximate beyond
  double f = 0.0;             // Riccati eigenvalue f(E); 0 in the dephasing case
};

struct ModeSpectrum {
  std::vector<Mode> modes;
  bool hamming_classes = false;

  double total_weight() const {
    double s = 0.0;
    for (const Mode& m : modes) s += m.weight;
    return s;
  }
};

namespace detail {

inline double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Max-shifted softmax; -inf entries map to exact zeros.
inline void normalize_log_weights(std::vector<double>& lw) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : lw) m = std::max(m, v);
  double z = 0.0;
  for (double& v : lw) {
    v = std::isinf(v) && v < 0.0 ? 0.0 : std::exp(v - m);
    z += v;
  }
  for (double& v : lw) v /= z;
}

// sigma^z eigenvalue of spin n (1-based) in index i; bit i_1 is most significant.
inline double spin_sign(std::uint64_t index, int n_spins, int n) {
  return ((index >> (n_spins - n)) & 1u) ? -1.0 : 1.0;
}

inline double mode_f(double E, double alpha) {
  return alpha == 0.0 ? 0.0 : riccati_f(E, alpha);
}

}  // namespace detail

// Exact enumeration of all 2^N bath indices. beta_override is the beta value
// baked into E_i and E_i^+/- (the caller chooses beta or beta_eff); the Gibbs
// weights depend only on Omega_i and theta. Weights are computed in log space.
inline ModeSpectrum bath_spectrum(const ModelParams& p, double beta_override) {
  p.validate();
  if (p.N > kEnumerationMaxN)
    throw capacity_error("bath_spectrum: N > 24 cannot be enumerated; use hamming_spectrum");
  const std::uint64_t count = std::uint64_t{1} << p.N;

  ModeSpectrum out;
  out.modes.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    double e = beta_override;
    double om = 0.0;
    for (int n = 1; n <= p.N; ++n) {
      const double s = detail::spin_sign(i, p.N, n);
      e += p.g_n[static_cast<std::size_t>(n - 1)] * s;
      om += p.omega_n[static_cast<std::size_t>(n - 1)] * s;
    }
    Mode& m = out.modes[i];
    m.E = e;
    m.Omega = om;
    m.Eplus = om + e;
    m.Eminus = om - e;
    m.multiplicity = 1.0;
    m.f = detail::mode_f(e, p.alpha);
  }

  if (std::isinf(p.theta)) {
    // T = 0: all mass on the ground space of the bath, split equally on ties.
    double ground = out.modes[0].Omega;
    for (const Mode& m : out.modes) ground = std::min(ground, m.Omega);
    std::size_t hits = 0;
    for (const Mode& m : out.modes)
      if (m.Omega == ground) ++hits;
    for (Mode& m : out.modes) m.weight = (m.Omega == ground) ? 1.0 / static_cast<double>(hits) : 0.0;
  } else {
    std::vector<double> lw(count);
    for (std::uint64_t i = 0; i < count; ++i) lw[i] = -p.theta * out.modes[i].Omega;
    detail::normalize_log_weights(lw);
    for (std::uint64_t i = 0; i < count; ++i) out.modes[i].weight = lw[i];
  }
  return out;
}

// Hamming-class aggregation for uniform baths: N+1 records with
// E_k = g(N-2k) + beta_override, multiplicity C(N,k), and class mass
// C(N,k) 2^-N (1+delta)^(N-k) (1-delta)^k, delta = tanh(-omega theta),
// assembled in log space so any N up to ~10^6 stays finite.
inline ModeSpectrum hamming_spectrum(const ModelParams& p, double beta_override) {
  p.validate();
  if (!p.is_uniform())
    throw contract_error("hamming_spectrum: bath frequencies and couplings must be uniform");
  if (p.N > kHammingMaxN) throw capacity_error("hamming_spectrum: N too large");
  const double w0 = p.omega_n.front();
  const double g0 = p.g_n.front();

  ModeSpectrum out;
  out.hamming_classes = true;
  out.modes.resize(static_cast<std::size_t>(p.N) + 1);
  for (int k = 0; k <= p.N; ++k) {
    Mode& m = out.modes[static_cast<std::size_t>(k)];
    const double n2k = static_cast<double>(p.N - 2 * k);
    m.E = g0 * n2k + beta_override;
    m.Omega = w0 * n2k;
    m.Eplus = m.Omega + m.E;
    m.Eminus = m.Omega - m.E;
    const double lb = detail::log_binomial(p.N, k);
    const double mult = std::exp(lb);
    m.multiplicity = mult < 9.0e15 ? std::round(mult) : mult;
    m.f = detail::mode_f(m.E, p.alpha);
  }

  if (std::isinf(p.theta)) {
    if (w0 > 0.0) {
      for (Mode& m : out.modes) m.weight = 0.0;
      out.modes.back().weight = 1.0;  // all spins down minimizes Omega
    } else if (w0 < 0.0) {
      for (Mode& m : out.modes) m.weight = 0.0;
      out.modes.front().weight = 1.0;
    } else {
      // Degenerate bath: every index is a ground state.
      std::vector<double> lw(out.modes.size());
      for (int k = 0; k <= p.N; ++k)
        lw[static_cast<std::size_t>(k)] = detail::log_binomial(p.N, k);
      detail::normalize_log_weights(lw);
      for (int k = 0; k <= p.N; ++k) out.modes[static_cast<std::size_t>(k)].weight = lw[static_cast<std::size_t>(k)];
    }
    return out;
  }

  const double delta = std::tanh(-w0 * p.theta);
  const double lp = std::log1p(delta) - std::log(2.0);   // log((1+delta)/2)
  const double lm = std::log1p(-delta) - std::log(2.0);  // log((1-delta)/2)
  std::vector<double> lw(out.modes.size());
  for (int k = 0; k <= p.N; ++k) {
    // Skip zero multiples so a saturated tanh (delta = +-1) cannot make 0*inf.
    double v = detail::log_binomial(p.N, k);
    if (p.N - k > 0) v += (p.N - k) * lp;
    if (k > 0) v += k * lm;
    lw[static_cast<std::size_t>(k)] = v;
  }
  detail::normalize_log_weights(lw);
  for (int k = 0; k <= p.N; ++k) out.modes[static_cast<std::size_t>(k)].weight = lw[static_cast<std::size_t>(k)];
  return out;
}

// Gibbs weight of a single bath index as the product form
// prod_n (1 + b_n (-1)^{i_n})/2 with b_n = tanh(-omega_n theta).
inline double product_weight(const ModelParams& p, std::uint64_t index) {
  p.validate();
  if (p.N > 64) throw capacity_error("product_weight: index space exceeds 64 bits");
  if (p.N < 64 && index >= (std::uint64_t{1} << p.N))
    throw std::out_of_range("product_weight: index out of range");
  double w = 1.0;
  for (int n = 1; n <= p.N; ++n) {
    const double wn = p.omega_n[static_cast<std::size_t>(n - 1)];
    double bn;
    if (std::isinf(p.theta)) {
      bn = wn > 0.0 ? -1.0 : (wn < 0.0 ? 1.0 : 0.0);
    } else {
      bn = std::tanh(-wn * p.theta);
    }
    w *= 0.5 * (1.0 + bn * detail::spin_sign(index, p.N, n));
  }
  return w;
}

// Index of the bath ground state (argmin Omega_i), ties broken toward the
// smallest index: bit n is set exactly when omega_n > 0.
inline std::uint64_t zero_temperature_index(const ModelParams& p) {
  p.validate();
  if (p.N > 64) throw capacity_error("zero_temperature_index: index space exceeds 64 bits");
  std::uint64_t idx = 0;
  for (int n = 1; n <= p.N; ++n)
    if (p.omega_n[static_cast<std::size_t>(n - 1)] > 0.0)
      idx |= std::uint64_t{1} << (p.N - n);
  return idx;
}

}  // namespace qsb
