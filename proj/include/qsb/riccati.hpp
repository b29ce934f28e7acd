#pragma once

// Scalar roots of the per-mode quadratic  alpha f^2 + 2 lambda f - alpha = 0
// and the similarity transform built from them. The operator equation reduces
// to this scalar family because all blocks commute and share the product basis.

#include <cmath>

#include "qsb/errors.hpp"
#include "qsb/mat2.hpp"

namespace qsb {

enum class RiccatiBranch { principal, secondary };

// Principal root (sqrt(l^2 + a^2) - l)/a. For lambda > 0 the difference form
// cancels catastrophically once lambda/alpha is large, so the rationalized
// form a/(sqrt(l^2+a^2) + l) is used there. Bounded as alpha -> 0 for lambda > 0.
inline double riccati_f(double lambda, double alpha) {
  if (alpha == 0.0)
    throw contract_error("riccati_f: alpha = 0 has no quadratic root; the dynamics uses f = 0 there");
  if (lambda > 0.0) return alpha / (std::hypot(lambda, alpha) + lambda);
  return (std::hypot(lambda, alpha) - lambda) / alpha;
}

// Secondary root (-sqrt(l^2 + a^2) - l)/a; diverges as alpha -> 0.
inline double riccati_f2(double lambda, double alpha) {
  if (alpha == 0.0)
    throw contract_error("riccati_f2: alpha = 0 has no quadratic root");
  if (lambda < 0.0) return -alpha / (std::hypot(lambda, alpha) - lambda);
  return -(std::hypot(lambda, alpha) + lambda) / alpha;
}

inline double riccati_root(RiccatiBranch branch, double lambda, double alpha) {
  return branch == RiccatiBranch::principal ? riccati_f(lambda, alpha)
                                            : riccati_f2(lambda, alpha);
}

// |alpha f^2 + 2 lambda f - alpha|
inline double riccati_residual(double f, double lambda, double alpha) {
  return std::abs(alpha * f * f + 2.0 * lambda * f - alpha);
}

struct ModeSimilarity {
  double f = 0.0;
  Mat2 U = Mat2::identity();  // (1+f^2)^{-1/2} [[1, -f], [f, 1]]
  double det_raw = 1.0;       // 1 + f^2, determinant before rescaling
};

// The raw similarity matrix [[1, -f], [f, 1]] has determinant 1 + f^2;
// dividing by sqrt(1+f^2) makes it unitary. U diag(a, b) U^dag gives the
// mixed form with entries (a + b f^2)/(1+f^2) and f(a - b)/(1+f^2).
inline ModeSimilarity mode_similarity(double f) {
  const double s = std::hypot(1.0, f);
  const double c = 1.0 / s;
  const double fs = f / s;
  return {f, Mat2{cplx(c), cplx(-fs), cplx(fs), cplx(c)}, 1.0 + f * f};
}

}  // namespace qsb
