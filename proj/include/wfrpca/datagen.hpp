#pragma once

#include "wfrpca/dense_matrix.hpp"
#include "wfrpca/mask.hpp"
#include "wfrpca/rng.hpp"

namespace wfrpca {

// Recipe for a synthetic low-rank-plus-sparse instance.
struct SyntheticSpec {
    int m = 0;
    int n = 0;
    int true_rank = 1;
    double corruption_fraction = 0.0;   // in [0, 1)
    double corruption_magnitude = 1.0;  // corruption values uniform on (-mag, mag)
    double observe_fraction = 1.0;      // in (0, 1]
    RngSeed seed{0};

    void validate() const;
};

struct GroundTruth {
    DenseMatrix X_true;
    DenseMatrix S_true;
    DenseMatrix M;  // X_true + S_true, exact
    ObservationMask mask;
};

// X_true = L R' scaled so entries have unit variance regardless of rank;
// corruption support and observation mask are drawn independently, both
// uniform without replacement. Deterministic in the seed.
GroundTruth generate(const SyntheticSpec& spec);

struct RecoveryMetrics {
    double rel_error_x = 0.0;    // ||X^ - X*||_F / ||X*||_F
    double rel_error_s = 0.0;    // ||S^ - S*||_F / (1 + ||S*||_F)
    int rank_x = 0;              // singular values above 1e-6 * sigma_1
    double support_precision = 1.0;
    double support_recall = 1.0;
};

RecoveryMetrics recovery_metrics(const GroundTruth& truth, const DenseMatrix& x_hat,
                                 const DenseMatrix& s_hat);

}  // namespace wfrpca
