#pragma once

#include <string>

#include "wfrpca/dense_matrix.hpp"
#include "wfrpca/weights.hpp"

namespace wfrpca {

// The four factorizable surrogates. Each pairs a penalty h1 on A*W^{-1} with
// a penalty h2 on B such that min over A*B' = X of h1 + h2 equals the
// weighted spectral quantity:
//   WeightedNuclear          h1 = 1/2 ||.||_F^2   h2 = 1/2 ||.||_F^2
//   WeightedSchattenHalf     h1 = 1/2 ||.||_*     h2 = 1/2 ||.||_*
//   WeightedSchattenTwoThirds h1 = 1/3 ||.||_F^2  h2 = 2/3 ||.||_*
//   WeightedLog              h1 = 1/2 ||.||_L1    h2 = 1/2 ||.||_L1
enum class RegKind { WeightedNuclear, WeightedSchattenHalf, WeightedSchattenTwoThirds, WeightedLog };

struct Regularizer {
    RegKind kind = RegKind::WeightedNuclear;
    double eps_log = 0.01;  // only read for WeightedLog

    static Regularizer nuclear() { return {RegKind::WeightedNuclear, 0.01}; }
    static Regularizer schatten_half() { return {RegKind::WeightedSchattenHalf, 0.01}; }
    static Regularizer schatten_two_thirds() { return {RegKind::WeightedSchattenTwoThirds, 0.01}; }
    static Regularizer log(double eps = 0.01);
};

std::string to_string(RegKind kind);
// Accepts nuclear | schatten_half | schatten_two_thirds | log.
RegKind parse_reg_kind(const std::string& name);

// Singular values considered nonzero above this fraction of sigma_1.
inline constexpr double kRankRelTol = 1e-10;

// Sum_i (sigma_i / W_ii)^q over all singular values; zeros contribute 0.
// This is the q-th power of the weighted Schatten-q norm, the quantity the
// factorization identities produce. q restricted to {2, 1, 2/3, 1/2}.
double weighted_schatten_power(const DenseMatrix& x, const WeightSpec& w, double q);

// Sum_i log((sigma_i / W_ii)^{1/k} + eps) over all min(m,n) singular values;
// each zero contributes log(eps). k in {1, 2}, eps > 0.
double weighted_log_norm(const DenseMatrix& x, const WeightSpec& w, int k, double eps);

// Unweighted log norm sum_i log(sigma_i + eps) over all min(m,n) singular
// values; the per-factor penalty of the WeightedLog pairing.
double log_norm(const DenseMatrix& x, double eps);

// h1(A W^{-1}) + h2(B) under the given pairing. A is m x r, B is n x r,
// len(W) = r.
double surrogate_objective(const DenseMatrix& a, const DenseMatrix& b, const WeightSpec& w,
                           const Regularizer& reg);

// The value min over A*B' = X of h1 + h2 attains, computed directly from the
// singular values of X. For Schatten kinds this equals weighted_schatten_power
// with the matching q. For the log kind the zero singular values are counted
// at the factor width r (each contributing log(eps)), not at min(m,n): the
// factors are m x r and n x r, so that is the count their log norms carry.
double factorization_target(const DenseMatrix& x, const WeightSpec& w, const Regularizer& reg,
                            int r);

// Explicit minimizing factorization from the singular value decomposition.
struct FactorWitness {
    DenseMatrix A_tilde;  // m x r
    DenseMatrix B_tilde;  // n x r
};

// For nuclear / Schatten-1/2 / log kinds:
//   A~ = [U S^{1/2} Wx^{1/2}, 0],  B~ = [V S^{1/2} Wx^{-1/2}, 0]
// for Schatten-2/3:
//   A~ = [U S^{1/3} Wx^{2/3}, 0],  B~ = [V S^{2/3} Wx^{-2/3}, 0]
// where Wx is the leading rank(X) block of W and columns are zero-padded to
// width r. Requires r >= numerical rank of X and len(W) = r. The surrogate
// objective of the witness equals factorization_target.
FactorWitness build_witness(const DenseMatrix& x, const WeightSpec& w, const Regularizer& reg,
                            int r);

}  // namespace wfrpca
