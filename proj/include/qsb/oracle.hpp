#pragma once

// Brute-force references on the full 2^{N+1}-dimensional space: a factorized
// rotating-frame propagator built from a dense Hermitian eigendecomposition,
// an independent RK4 integrator for the time-dependent Schrodinger equation,
// reduction by blockwise partial trace, and the block-diagonalization residual
// of the Riccati construction.
//
// Basis convention: |q, i> maps to row q * 2^N + i (qubit major), so the four
// quadrants of a full-space matrix are the blocks of the 2x2 block picture.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "qsb/errors.hpp"
#include "qsb/mat2.hpp"
#include "qsb/model.hpp"
#include "qsb/spectrum.hpp"

namespace qsb::oracle {

inline constexpr int kDenseMaxN = 12;

namespace detail {

inline void require_dense(const ModelParams& p) {
  p.validate();
  if (p.N > kDenseMaxN)
    throw capacity_error("oracle: N > 12 exceeds the dense full-space cap");
}

// Diagonals of H_E = sum omega_n sigma_n^z and B = sum g_n sigma_n^z over the
// bath product basis.
inline void bath_diagonals(const ModelParams& p, Eigen::VectorXd& h_env, Eigen::VectorXd& h_int) {
  const Eigen::Index d = Eigen::Index{1} << p.N;
  h_env.resize(d);
  h_int.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    double we = 0.0, gi = 0.0;
    for (int n = 1; n <= p.N; ++n) {
      const double s = qsb::detail::spin_sign(static_cast<std::uint64_t>(i), p.N, n);
      we += p.omega_n[static_cast<std::size_t>(n - 1)] * s;
      gi += p.g_n[static_cast<std::size_t>(n - 1)] * s;
    }
    h_env[i] = we;
    h_int[i] = gi;
  }
}

}  // namespace detail

// Diagonal of the bath Gibbs state in the product basis; spin-bath weights are
// the single source of truth (H_E is never exponentiated densely).
inline Eigen::VectorXd gibbs_bath_weights(const ModelParams& p) {
  detail::require_dense(p);
  const ModeSpectrum s = bath_spectrum(p, 0.0);
  Eigen::VectorXd w(static_cast<Eigen::Index>(s.modes.size()));
  for (Eigen::Index i = 0; i < w.size(); ++i)
    w[i] = s.modes[static_cast<std::size_t>(i)].weight;
  return w;
}

// Static block form of the full Hamiltonian at drive phase zero:
// diagonal blocks diag(E_i^+), diag(E_i^-), off-diagonal blocks alpha * I.
inline Eigen::MatrixXcd build_full_hamiltonian(const ModelParams& p, double beta_value) {
  detail::require_dense(p);
  const Eigen::Index d = Eigen::Index{1} << p.N;
  const ModeSpectrum s = bath_spectrum(p, beta_value);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Mode& m = s.modes[static_cast<std::size_t>(i)];
    h(i, i) = m.Eplus;
    h(d + i, d + i) = m.Eminus;
    h(i, d + i) = p.alpha;
    h(d + i, i) = p.alpha;
  }
  return h;
}

// Literal assembly of H(t) = H_Q(t) (x) I + I (x) H_E + sigma^z (x) B with
// H_Q(t) = beta sz + alpha (sy sin(wt) + sx cos(wt)); the time dependence sits
// entirely in the off-diagonal blocks alpha e^{-+ i w t} I.
inline Eigen::MatrixXcd full_hamiltonian_t(const ModelParams& p, double t) {
  detail::require_dense(p);
  const Eigen::Index d = Eigen::Index{1} << p.N;
  Eigen::VectorXd h_env, h_int;
  detail::bath_diagonals(p, h_env, h_int);
  const cplx a = p.alpha * std::polar(1.0, -p.omega_drive * t);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    h(i, i) = p.beta + h_env[i] + h_int[i];
    h(d + i, d + i) = -p.beta + h_env[i] - h_int[i];
    h(i, d + i) = a;
    h(d + i, i) = std::conj(a);
  }
  return h;
}

// U_t = e^{iKt} e^{-i H(beta - w/2) t} with K = -(w/2) sz (x) I. One Hermitian
// eigendecomposition serves every time point.
class ExactPropagator {
 public:
  explicit ExactPropagator(const ModelParams& p)
      : omega_(p.omega_drive), dim_(Eigen::Index{1} << p.N) {
    detail::require_dense(p);
    const Eigen::MatrixXcd h_eff = build_full_hamiltonian(p, p.beta - 0.5 * p.omega_drive);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h_eff);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("ExactPropagator: eigendecomposition failed");
    eigs_ = es.eigenvalues();
    vecs_ = es.eigenvectors();
  }

  Eigen::MatrixXcd at(double t) const {
    Eigen::VectorXcd phases(eigs_.size());
    for (Eigen::Index k = 0; k < eigs_.size(); ++k) phases[k] = std::polar(1.0, -eigs_[k] * t);
    Eigen::MatrixXcd u = vecs_ * phases.asDiagonal() * vecs_.adjoint();
    const cplx top = std::polar(1.0, -0.5 * omega_ * t);  // e^{iKt} block phases
    u.topRows(dim_) *= top;
    u.bottomRows(dim_) *= std::conj(top);
    return u;
  }

 private:
  double omega_;
  Eigen::Index dim_;
  Eigen::VectorXd eigs_;
  Eigen::MatrixXcd vecs_;
};

inline Eigen::MatrixXcd full_propagator_exact(double t, const ModelParams& p) {
  return ExactPropagator(p).at(t);
}

// Classical fixed-step RK4 for i dU/dt = H(t) U, U(0) = I. Every sigma_n^z is
// diagonal, so H(t) never couples different bath indices and the propagator
// stays block sparse: one 2x2 block per index i, with diagonal entries
// (+-beta + Omega_i +- B_i) and off-diagonal alpha e^{-+ i w t}. The integrator
// carries exactly those blocks; the RK4 arithmetic itself is plain and knows
// nothing of the rotating frame or the Riccati solution. The raw,
// non-reunitarized state is exposed.
class SchrodingerIntegrator {
 public:
  SchrodingerIntegrator(const ModelParams& p, double dt)
      : dt_(dt), alpha_(p.alpha), omega_(p.omega_drive) {
    detail::require_dense(p);
    if (!(dt > 0.0)) throw contract_error("SchrodingerIntegrator: dt must be positive");
    Eigen::VectorXd h_env, h_int;
    detail::bath_diagonals(p, h_env, h_int);
    const Eigen::Index d = h_env.size();
    diag_top_ = (p.beta + (h_env + h_int).array()).matrix();
    diag_bottom_ = (-p.beta + (h_env - h_int).array()).matrix();
    blocks_.assign(static_cast<std::size_t>(d), Mat2::identity());
  }

  double time() const { return t_; }
  double step_size() const { return dt_; }
  Eigen::Index bath_dim() const { return diag_top_.size(); }

  void advance_to(double t_target) {
    if (t_target < t_) throw contract_error("SchrodingerIntegrator: cannot integrate backwards");
    while (t_target - t_ > 1e-14 * std::max(1.0, std::abs(t_target))) {
      step(std::min(dt_, t_target - t_));
    }
    t_ = t_target;
  }

  // The (0,i),(1,i) block of the propagator.
  const Mat2& block(Eigen::Index i) const { return blocks_[static_cast<std::size_t>(i)]; }

  // Dense full-space propagator, assembled from the blocks.
  Eigen::MatrixXcd state() const {
    const Eigen::Index d = bath_dim();
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const Mat2& b = blocks_[static_cast<std::size_t>(i)];
      u(i, i) = b.a11;
      u(i, d + i) = b.a12;
      u(d + i, i) = b.a21;
      u(d + i, d + i) = b.a22;
    }
    return u;
  }

  // Tr_E( U (rho0 (x) diag(w)) U^dag ) for the current propagator, raw.
  Mat2 reduced(const DensityMatrix2& rho0, const Eigen::VectorXd& w) const {
    if (w.size() != bath_dim())
      throw contract_error("SchrodingerIntegrator: weight dimension mismatch");
    Mat2 acc;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      if (w[i] == 0.0) continue;
      const Mat2& b = blocks_[static_cast<std::size_t>(i)];
      acc = acc + w[i] * (b * rho0.matrix() * adjoint(b));
    }
    return acc;
  }

 private:
  void step(double h) {
    const cplx a1 = alpha_ * std::polar(1.0, -omega_ * t_);
    const cplx a2 = alpha_ * std::polar(1.0, -omega_ * (t_ + 0.5 * h));
    const cplx a3 = alpha_ * std::polar(1.0, -omega_ * (t_ + h));
    const cplx mi(0.0, -1.0);
    for (Eigen::Index i = 0; i < bath_dim(); ++i) {
      const double d0 = diag_top_[i], d1 = diag_bottom_[i];
      auto rhs = [&](cplx a, const Mat2& m) {
        return Mat2{mi * (d0 * m.a11 + a * m.a21), mi * (d0 * m.a12 + a * m.a22),
                    mi * (std::conj(a) * m.a11 + d1 * m.a21),
                    mi * (std::conj(a) * m.a12 + d1 * m.a22)};
      };
      Mat2& u = blocks_[static_cast<std::size_t>(i)];
      const Mat2 k1 = rhs(a1, u);
      const Mat2 k2 = rhs(a2, u + (0.5 * h) * k1);
      const Mat2 k3 = rhs(a2, u + (0.5 * h) * k2);
      const Mat2 k4 = rhs(a3, u + h * k3);
      u = u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    t_ += h;
  }

  double dt_, alpha_, omega_;
  double t_ = 0.0;
  Eigen::VectorXd diag_top_, diag_bottom_;
  std::vector<Mat2> blocks_;
};

inline Eigen::MatrixXcd full_propagator_ode(double t, const ModelParams& p, double dt) {
  SchrodingerIntegrator integ(p, dt);
  integ.advance_to(t);
  return integ.state();
}

// Conservative bound on the spectral radius of H(t); used to flag RK4 steps
// that violate dt * radius <= 1e-2.
inline double spectral_radius_bound(const ModelParams& p) {
  double s = std::abs(p.alpha) + std::abs(p.beta);
  for (int n = 0; n < p.N; ++n)
    s += std::abs(p.omega_n[static_cast<std::size_t>(n)]) + std::abs(p.g_n[static_cast<std::size_t>(n)]);
  return s;
}

// Tr_E( U (rho0 (x) diag(w)) U^dag ) without forming the full conjugation:
// only column pairs (q, i), (q', i) of U enter for each bath index i. Returned
// raw: with the non-reunitarized RK4 propagator the result carries the
// integrator's O(dt^4) defect and would fail strict state validation.
inline Mat2 reduced_state(const Eigen::MatrixXcd& u, const DensityMatrix2& rho0,
                          const Eigen::VectorXd& w) {
  const Eigen::Index d = w.size();
  if (u.rows() != 2 * d || u.cols() != 2 * d)
    throw contract_error("reduced_state: propagator/weight dimensions disagree");
  const Mat2& r = rho0.matrix();
  const cplx rq[2][2] = {{r.a11, r.a12}, {r.a21, r.a22}};
  cplx out[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int q = 0; q < 2; ++q)
        for (int qq = 0; qq < 2; ++qq) {
          if (rq[q][qq] == cplx(0.0)) continue;
          cplx s(0.0);
          for (Eigen::Index i = 0; i < d; ++i) {
            if (w[i] == 0.0) continue;
            s += w[i] * u.col(q * d + i)
                            .segment(a * d, d)
                            .cwiseProduct(u.col(qq * d + i).segment(b * d, d).conjugate())
                            .sum();
          }
          out[a][b] += rq[q][qq] * s;
        }
  return {out[0][0], out[0][1], out[1][0], out[1][1]};
}

// Ground-truth reduced state at time t through the exact propagator; the
// result satisfies the density-matrix invariants and is validated as such.
inline DensityMatrix2 reduced_from_full(const DensityMatrix2& rho0, const ModelParams& p, double t) {
  return DensityMatrix2(reduced_state(ExactPropagator(p).at(t), rho0, gibbs_bath_weights(p)));
}

// U_X^{-1} H(beta) U_X with X = diag(f(E_i)) (Hermitian, hence normal), using
// the closed-form inverse (I + X X^dag)^{-1} [[I, X], [-X, I]].
// f_offset perturbs every eigenvalue of X; nonzero values are a diagnostic
// hook that must make the residual blow up.
inline Eigen::MatrixXcd riccati_block_transform(const ModelParams& p, double f_offset = 0.0) {
  p.validate();
  if (p.N > 10) throw capacity_error("riccati_block_transform: N > 10");
  const Eigen::Index d = Eigen::Index{1} << p.N;
  const ModeSpectrum s = bath_spectrum(p, p.beta);
  Eigen::VectorXd f(d);
  for (Eigen::Index i = 0; i < d; ++i) f[i] = s.modes[static_cast<std::size_t>(i)].f + f_offset;

  Eigen::MatrixXcd ux = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
  Eigen::MatrixXcd uxinv = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    ux(i, i) = 1.0;
    ux(d + i, d + i) = 1.0;
    ux(i, d + i) = -f[i];
    ux(d + i, i) = f[i];
    const double inv = 1.0 / (1.0 + f[i] * f[i]);
    uxinv(i, i) = inv;
    uxinv(d + i, d + i) = inv;
    uxinv(i, d + i) = inv * f[i];
    uxinv(d + i, i) = -inv * f[i];
  }
  const Eigen::MatrixXcd h = build_full_hamiltonian(p, p.beta);
  return uxinv * h * ux;
}

// Frobenius norm of the off-diagonal blocks of the transformed Hamiltonian,
// relative to ||H||_F. alpha = 0 is already block diagonal (X = 0).
inline double block_diag_residual(const ModelParams& p, double f_offset = 0.0) {
  p.validate();
  if (p.N > 10) throw capacity_error("block_diag_residual: N > 10");
  if (p.alpha == 0.0 && f_offset == 0.0) return 0.0;
  const Eigen::Index d = Eigen::Index{1} << p.N;
  const Eigen::MatrixXcd hd = riccati_block_transform(p, f_offset);
  const double off = std::sqrt(hd.topRightCorner(d, d).squaredNorm() +
                               hd.bottomLeftCorner(d, d).squaredNorm());
  return off / build_full_hamiltonian(p, p.beta).norm();
}

}  // namespace qsb::oracle
