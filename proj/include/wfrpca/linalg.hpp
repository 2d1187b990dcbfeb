#pragma once

#include <stdexcept>
#include <vector>

#include "wfrpca/dense_matrix.hpp"
#include "wfrpca/rng.hpp"

namespace wfrpca {

// Raised when a dense factorization fails instead of returning garbage.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thin SVD, X = U * diag(singular_values) * V'. Singular values are sorted
// non-increasing; signs are normalized so the largest-magnitude entry of each
// U column is positive, which keeps factor constructions deterministic.
struct SvdTriple {
    DenseMatrix U;
    std::vector<double> singular_values;
    DenseMatrix V;

    DenseMatrix reconstruct() const;
};

SvdTriple svd(const DenseMatrix& x);

// Singular values only (no vectors), sorted non-increasing.
std::vector<double> singular_values(const DenseMatrix& x);

double spectral_norm(const DenseMatrix& x);

// Count of singular values above rel_tol * sigma_max.
int numerical_rank(const std::vector<double>& sigma, double rel_tol = 1e-10);

// Solves Z * G = R for Z given symmetric positive definite G (r x r).
// Throws NumericalError when G is not positive definite.
DenseMatrix solve_spd_right(const DenseMatrix& r, const DenseMatrix& g);

// n x r matrix with orthonormal columns; a standard Gaussian sample
// orthonormalized by QR, so the distribution is invariant under left
// multiplication by orthogonal matrices. Requires n >= r >= 1.
DenseMatrix random_stiefel(int n, int r, RngSeed seed);

}  // namespace wfrpca
