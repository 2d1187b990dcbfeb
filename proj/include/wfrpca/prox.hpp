#pragma once

#include "wfrpca/dense_matrix.hpp"
#include "wfrpca/norms.hpp"

namespace wfrpca {

// Sign-preserving scalar soft threshold sign(y) * max(|y| - t, 0).
double soft_threshold(double y, double t);

// Entrywise soft threshold.
DenseMatrix soft_threshold(const DenseMatrix& y, double t);

// argmin_Z t*alpha*||Z||_F^2 + 1/2 ||Z - Y||_F^2 = Y / (1 + 2*alpha*t).
DenseMatrix prox_fro_squared(const DenseMatrix& y, double alpha, double t);

// Singular value thresholding U * diag(max(sigma - tau, 0)) * V'.
DenseMatrix svt(const DenseMatrix& y, double tau);

// Logarithmic scalar thresholding: minimizes 1/2 (x - y)^2 + t log(x + eps)
// over x >= 0. With D = (y - eps)^2 - 4 (t - y*eps), returns 0 when D <= 0,
// otherwise the better of {0, (y - eps + sqrt(D)) / 2}; exact ties go to 0.
double lsvt_scalar(double y, double t, double eps);

// Logarithmic singular value thresholding: lsvt_scalar applied to each
// singular value.
DenseMatrix lsvt(const DenseMatrix& y, double t, double eps);

enum class ProxSide { FactorA, FactorB };

// Prox of t*h1 (FactorA) or t*h2 (FactorB) for the regularizer's pairing:
//   WeightedNuclear           both sides  prox_fro_squared(alpha = 1/2)
//   WeightedSchattenHalf      both sides  svt(tau = t/2)
//   WeightedSchattenTwoThirds A: prox_fro_squared(alpha = 1/3), B: svt(2t/3)
//   WeightedLog               both sides  lsvt(step t/2, reg.eps_log)
DenseMatrix prox_regularizer(const DenseMatrix& y, const Regularizer& reg, ProxSide side,
                             double t);

}  // namespace wfrpca
