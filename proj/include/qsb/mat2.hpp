#pragma once

// Exact complex 2x2 algebra: Pauli decompositions, closed-form Hermitian
// exponentials, fidelity and norms, and the blockwise partial trace.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "qsb/errors.hpp"

namespace qsb {

using cplx = std::complex<double>;

struct Mat2 {
  cplx a11{0.0}, a12{0.0}, a21{0.0}, a22{0.0};

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 diagonal(cplx d1, cplx d2) { return {d1, 0.0, 0.0, d2}; }
};

inline Mat2 operator+(const Mat2& a, const Mat2& b) {
  return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
}

inline Mat2 operator-(const Mat2& a, const Mat2& b) {
  return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
}

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
          a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

inline Mat2 operator*(cplx s, const Mat2& a) {
  return {s * a.a11, s * a.a12, s * a.a21, s * a.a22};
}

inline Mat2 operator*(double s, const Mat2& a) { return cplx(s) * a; }

inline Mat2 adjoint(const Mat2& a) {
  return {std::conj(a.a11), std::conj(a.a21), std::conj(a.a12), std::conj(a.a22)};
}

inline cplx trace(const Mat2& a) { return a.a11 + a.a22; }

inline cplx det(const Mat2& a) { return a.a11 * a.a22 - a.a12 * a.a21; }

inline double frobenius_norm_sq(const Mat2& a) {
  return std::norm(a.a11) + std::norm(a.a12) + std::norm(a.a21) + std::norm(a.a22);
}

inline double frobenius_norm(const Mat2& a) { return std::sqrt(frobenius_norm_sq(a)); }

inline double max_abs(const Mat2& a) {
  return std::max(std::max(std::abs(a.a11), std::abs(a.a12)),
                  std::max(std::abs(a.a21), std::abs(a.a22)));
}

// ||A - A^dag||_F
inline double hermiticity_error(const Mat2& a) { return frobenius_norm(a - adjoint(a)); }

// ||U U^dag - I||_F
inline double unitarity_error(const Mat2& u) {
  return frobenius_norm(u * adjoint(u) - Mat2::identity());
}

inline Mat2 sigma_x() { return {0.0, 1.0, 1.0, 0.0}; }
inline Mat2 sigma_y() { return {0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0}; }
inline Mat2 sigma_z() { return {1.0, 0.0, 0.0, -1.0}; }

// Coefficients of H = c0*I + nx*sx + ny*sy + nz*sz for Hermitian H.
struct Hermitian2Decomposition {
  double c0 = 0.0;
  double nx = 0.0, ny = 0.0, nz = 0.0;

  double pauli_norm() const { return std::hypot(nx, std::hypot(ny, nz)); }

  Mat2 reconstruct() const {
    return {cplx(c0 + nz, 0.0), cplx(nx, -ny), cplx(nx, ny), cplx(c0 - nz, 0.0)};
  }
};

inline Hermitian2Decomposition decompose_hermitian(const Mat2& h, double tol = 1e-12) {
  const double scale = std::max(1.0, frobenius_norm(h));
  if (hermiticity_error(h) > tol * scale)
    throw contract_error("decompose_hermitian: matrix is not Hermitian");
  Hermitian2Decomposition d;
  d.c0 = 0.5 * (h.a11.real() + h.a22.real());
  d.nz = 0.5 * (h.a11.real() - h.a22.real());
  d.nx = 0.5 * (h.a12.real() + h.a21.real());
  d.ny = 0.5 * (h.a21.imag() - h.a12.imag());
  return d;
}

// exp(-i H t) for Hermitian H, in closed form:
//   exp(-i(c0 I + n.sigma)t) = e^{-i c0 t} (I cos(|n|t) - i (n.sigma/|n|) sin(|n|t)).
// |n| = 0 is a removable singularity and returns e^{-i c0 t} I.
inline Mat2 herm2_exp(const Mat2& h, double t, double tol = 1e-12) {
  const Hermitian2Decomposition d = decompose_hermitian(h, tol);
  const double r = d.pauli_norm();
  const cplx phase = std::exp(cplx(0.0, -d.c0 * t));
  if (r == 0.0) return phase * Mat2::identity();
  const double c = std::cos(r * t);
  const double s = std::sin(r * t) / r;
  const cplx i_s(0.0, s);
  return {phase * (c - i_s * d.nz), phase * (-i_s * cplx(d.nx, -d.ny)),
          phase * (-i_s * cplx(d.nx, d.ny)), phase * (c + i_s * d.nz)};
}

// A 2x2 Hermitian, unit-trace, positive matrix; validated on construction.
class DensityMatrix2 {
 public:
  static constexpr double kHermTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;
  static constexpr double kEigTol = 1e-12;

  explicit DensityMatrix2(const Mat2& rho) : rho_(rho) { validate(); }

  static DensityMatrix2 from_bloch(double bx, double by, double bz) {
    const double r = std::sqrt(bx * bx + by * by + bz * bz);
    if (r > 1.0 + 1e-12) throw contract_error("DensityMatrix2: Bloch vector has norm > 1");
    return DensityMatrix2{{cplx(0.5 * (1.0 + bz), 0.0), 0.5 * cplx(bx, -by),
                           0.5 * cplx(bx, by), cplx(0.5 * (1.0 - bz), 0.0)}};
  }

  // |psi><psi| for the (normalized) amplitude pair.
  static DensityMatrix2 pure(cplx amp0, cplx amp1) {
    const double n = std::sqrt(std::norm(amp0) + std::norm(amp1));
    if (n == 0.0) throw contract_error("DensityMatrix2: zero state vector");
    amp0 /= n;
    amp1 /= n;
    return DensityMatrix2{{amp0 * std::conj(amp0), amp0 * std::conj(amp1),
                           amp1 * std::conj(amp0), amp1 * std::conj(amp1)}};
  }

  static DensityMatrix2 maximally_mixed() { return DensityMatrix2{{0.5, 0.0, 0.0, 0.5}}; }

  const Mat2& matrix() const { return rho_; }
  double coherence() const { return std::abs(rho_.a12); }
  double purity() const { return frobenius_norm_sq(rho_); }

  // {min, max}; exact closed form from the Pauli decomposition.
  std::array<double, 2> eigenvalues() const {
    const double c0 = 0.5 * (rho_.a11.real() + rho_.a22.real());
    const double nz = 0.5 * (rho_.a11.real() - rho_.a22.real());
    const double r = std::hypot(std::abs(rho_.a12), nz);
    return {c0 - r, c0 + r};
  }

  std::array<double, 3> bloch() const {
    return {2.0 * rho_.a12.real(), -2.0 * rho_.a12.imag(),
            rho_.a11.real() - rho_.a22.real()};
  }

 private:
  void validate() const {
    if (hermiticity_error(rho_) > kHermTol)
      throw contract_error("DensityMatrix2: not Hermitian");
    if (std::abs(trace(rho_) - cplx(1.0)) > kTraceTol)
      throw contract_error("DensityMatrix2: trace differs from 1");
    if (eigenvalues()[0] < -kEigTol)
      throw contract_error("DensityMatrix2: negative eigenvalue");
  }

  Mat2 rho_;
};

// Overlap Tr(rho sigma), the fidelity for the pure comparison states used here;
// clamped into [0, 1].
inline double fidelity(const DensityMatrix2& rho, const DensityMatrix2& sigma) {
  const double f = trace(rho.matrix() * sigma.matrix()).real();
  return std::clamp(f, 0.0, 1.0);
}

// Half the trace norm of a - b, through the Hermitian part of the difference.
inline double trace_distance(const Mat2& a, const Mat2& b) {
  const Mat2 d = a - b;
  const double c0 = 0.5 * (d.a11.real() + d.a22.real());
  const double nz = 0.5 * (d.a11.real() - d.a22.real());
  const double r = std::hypot(0.5 * std::abs(d.a12 + std::conj(d.a21)), nz);
  return 0.5 * (std::abs(c0 + r) + std::abs(c0 - r));
}

inline double trace_distance(const DensityMatrix2& rho, const DensityMatrix2& sigma) {
  return trace_distance(rho.matrix(), sigma.matrix());
}

// Blockwise partial trace: a 2x2 array of D x D blocks collapses to the 2x2
// matrix of block traces. Blocks must be square and share one dimension.
template <class M>
Mat2 partial_trace_blocks(const M& b11, const M& b12, const M& b21, const M& b22) {
  const auto d = b11.rows();
  if (d < 1) throw contract_error("partial_trace_blocks: empty blocks");
  for (const M* b : {&b11, &b12, &b21, &b22})
    if (b->rows() != d || b->cols() != d)
      throw contract_error("partial_trace_blocks: blocks must be square with equal dimension");
  Mat2 out;
  for (decltype(b11.rows()) k = 0; k < d; ++k) {
    out.a11 += b11(k, k);
    out.a12 += b12(k, k);
    out.a21 += b21(k, k);
    out.a22 += b22(k, k);
  }
  return out;
}

}  // namespace qsb
