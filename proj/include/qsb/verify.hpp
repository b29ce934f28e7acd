#pragma once

// Self-verification: drives the closed-form channel against the full-space
// oracles over randomized parameter sets and reports named tolerance checks.
// Shared by the CLI `verify` command and the acceptance suite.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "qsb/dynamics.hpp"
#include "qsb/mat2.hpp"
#include "qsb/model.hpp"
#include "qsb/oracle.hpp"
#include "qsb/riccati.hpp"
#include "qsb/spectrum.hpp"

namespace qsb {

struct VerifyOptions {
  std::uint64_t seed = 20100526;
  int min_bath = 1;
  int max_bath = 6;
  int sets_per_size = 20;
  int grid_points = 50;
  double t_max = 10.0;
  double ode_dt = 1e-3;
  double f_corruption = 0.0;  // diagnostic hook: offsets every Riccati eigenvalue
};

struct VerifyCheck {
  std::string name;
  double worst = 0.0;
  double tolerance = 0.0;
  bool pass() const { return worst <= tolerance; }
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  double elapsed_seconds = 0.0;
  bool step_warning = false;  // ode_dt * spectral radius exceeded 1e-2 somewhere

  bool all_pass() const {
    for (const VerifyCheck& c : checks)
      if (!c.pass()) return false;
    return true;
  }

  const VerifyCheck* find(const std::string& name) const {
    for (const VerifyCheck& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

namespace detail {

// Deterministic cross-platform generator (splitmix64 driving a 53-bit mantissa).
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
};

inline DensityMatrix2 random_state(SplitMix64& rng) {
  for (;;) {
    const double bx = rng.uniform(-1.0, 1.0);
    const double by = rng.uniform(-1.0, 1.0);
    const double bz = rng.uniform(-1.0, 1.0);
    if (bx * bx + by * by + bz * bz <= 1.0) return DensityMatrix2::from_bloch(bx, by, bz);
  }
}

// Random model: amplitudes and bath parameters in [-2, 2], drive frequency in
// [0, 4], theta cycling {0, 1, inf}. set_index 0 exercises the dephasing path;
// other sets keep |alpha| >= 0.25 since the double-precision residual of the
// exact Riccati root scales like 4 E^2 eps / |alpha| (the alpha -> 0 regime
// belongs to the dephasing branch, not to f).
inline ModelParams random_model(SplitMix64& rng, int n_bath, int set_index) {
  ModelParams p;
  p.N = n_bath;
  p.omega_n.resize(static_cast<std::size_t>(n_bath));
  p.g_n.resize(static_cast<std::size_t>(n_bath));
  for (double& w : p.omega_n) w = rng.uniform(-2.0, 2.0);
  for (double& g : p.g_n) g = rng.uniform(-2.0, 2.0);
  p.alpha = set_index == 0 ? 0.0 : (rng.next() % 2 ? 1.0 : -1.0) * rng.uniform(0.25, 2.0);
  p.beta = rng.uniform(-2.0, 2.0);
  p.omega_drive = rng.uniform(0.0, 4.0);
  switch (set_index % 3) {
    case 0: p.theta = 0.0; break;
    case 1: p.theta = 1.0; break;
    default: p.theta = std::numeric_limits<double>::infinity(); break;
  }
  return p;
}

struct CheckAccumulator {
  double channel_vs_exact = 0.0;
  double channel_vs_ode = 0.0;
  double riccati_residual = 0.0;
  double block_diag = 0.0;
  double channel_health = 0.0;  // max of |tr-1|, hermiticity error, negativity
  bool step_warning = false;

  void absorb(const CheckAccumulator& o) {
    channel_vs_exact = std::max(channel_vs_exact, o.channel_vs_exact);
    channel_vs_ode = std::max(channel_vs_ode, o.channel_vs_ode);
    riccati_residual = std::max(riccati_residual, o.riccati_residual);
    block_diag = std::max(block_diag, o.block_diag);
    channel_health = std::max(channel_health, o.channel_health);
    step_warning = step_warning || o.step_warning;
  }
};

// All named checks for one parameter set over one time grid.
inline CheckAccumulator check_model(const ModelParams& p, const DensityMatrix2& rho0,
                                    const std::vector<double>& grid, const VerifyOptions& opt) {
  CheckAccumulator acc;
  acc.step_warning = opt.ode_dt * oracle::spectral_radius_bound(p) > 1e-2;

  const ModeSpectrum spectrum = channel_spectrum(p, SpectrumPath::enumerate);
  for (const Mode& m : spectrum.modes) {
    acc.riccati_residual = std::max(
        acc.riccati_residual, riccati_residual(m.f + opt.f_corruption, m.E, p.alpha));
  }
  acc.block_diag = std::max(acc.block_diag, oracle::block_diag_residual(p, opt.f_corruption));

  const oracle::ExactPropagator exact(p);
  oracle::SchrodingerIntegrator ode(p, opt.ode_dt);
  const Eigen::VectorXd weights = oracle::gibbs_bath_weights(p);

  for (double t : grid) {
    const DensityMatrix2 eta = apply_channel(build_channel(t, p, spectrum), rho0);
    acc.channel_health = std::max({acc.channel_health,
                                   std::abs(trace(eta.matrix()) - cplx(1.0)),
                                   hermiticity_error(eta.matrix()),
                                   std::max(0.0, -eta.eigenvalues()[0])});

    const Mat2 ref = oracle::reduced_state(exact.at(t), rho0, weights);
    acc.channel_vs_exact = std::max(acc.channel_vs_exact, trace_distance(eta.matrix(), ref));

    ode.advance_to(t);
    acc.channel_vs_ode =
        std::max(acc.channel_vs_ode, trace_distance(eta.matrix(), ode.reduced(rho0, weights)));
  }
  return acc;
}

inline VerifyReport report_from(const CheckAccumulator& acc, double seconds) {
  VerifyReport rep;
  rep.checks = {
      {"channel_vs_exact_oracle", acc.channel_vs_exact, 1e-10},
      {"channel_vs_ode_oracle", acc.channel_vs_ode, 1e-6},
      {"riccati_residual", acc.riccati_residual, 1e-12},
      {"block_diag_residual", acc.block_diag, 1e-12},
      {"channel_trace_positivity", acc.channel_health, 1e-10},
  };
  rep.elapsed_seconds = seconds;
  rep.step_warning = acc.step_warning;
  return rep;
}

}  // namespace detail

// One configuration against every oracle; N <= 6 enforced.
inline VerifyReport verify_model(const ModelParams& p, const DensityMatrix2& rho0,
                                 const std::vector<double>& grid,
                                 const VerifyOptions& opt = {}) {
  p.validate();
  if (p.N > 6) throw capacity_error("verify: N > 6 is beyond the oracle suite cap");
  const auto start = std::chrono::steady_clock::now();
  const detail::CheckAccumulator acc = detail::check_model(p, rho0, grid, opt);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return detail::report_from(acc, secs);
}

// The default randomized suite: sets_per_size parameter draws for each bath
// size, each checked on grid_points times in [0, t_max] against both oracles.
inline VerifyReport run_verification_suite(const VerifyOptions& opt = {}) {
  if (opt.grid_points < 2 || opt.sets_per_size < 1 || opt.min_bath < 1 || opt.max_bath > 6)
    throw contract_error("run_verification_suite: bad options (need 2+ grid points, 1+ sets, bath sizes in 1..6)");
  const auto start = std::chrono::steady_clock::now();
  detail::SplitMix64 rng(opt.seed);
  detail::CheckAccumulator acc;
  std::vector<double> grid(static_cast<std::size_t>(opt.grid_points));
  for (int j = 0; j < opt.grid_points; ++j)
    grid[static_cast<std::size_t>(j)] =
        opt.t_max * static_cast<double>(j) / static_cast<double>(opt.grid_points - 1);

  for (int n = opt.min_bath; n <= opt.max_bath; ++n) {
    for (int s = 0; s < opt.sets_per_size; ++s) {
      const ModelParams p = detail::random_model(rng, n, s);
      const DensityMatrix2 rho0 = detail::random_state(rng);
      acc.absorb(detail::check_model(p, rho0, grid, opt));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return detail::report_from(acc, secs);
}

inline void print_report(std::ostream& os, const VerifyReport& rep, bool tol_table = false) {
  for (const VerifyCheck& c : rep.checks) {
    os << (c.pass() ? "PASS" : "FAIL") << "  " << c.name << "  worst=" << c.worst
       << "  tol=" << c.tolerance << "\n";
  }
  if (rep.step_warning)
    os << "WARNING  ode step exceeds dt * spectral_radius <= 1e-2; RK4 accuracy degraded\n";
  if (tol_table) {
    os << "tolerances: exact-oracle 1e-10, ode-oracle 1e-6, riccati 1e-12, "
          "block-diag 1e-12, trace/positivity 1e-10\n";
  }
  os << (rep.all_pass() ? "VERIFY OK" : "VERIFY FAILED") << "  (" << rep.elapsed_seconds
     << " s)\n";
}

}  // namespace qsb
