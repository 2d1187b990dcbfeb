#include "wfrpca/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wfrpca/linalg.hpp"

namespace wfrpca {

void SyntheticSpec::validate() const {
    if (m < 1 || n < 1) throw std::invalid_argument("SyntheticSpec: dimensions must be positive");
    if (true_rank < 1 || true_rank > std::min(m, n))
        throw std::invalid_argument("SyntheticSpec: need 1 <= true_rank <= min(m, n)");
    if (!(corruption_fraction >= 0.0 && corruption_fraction < 1.0))
        throw std::invalid_argument("SyntheticSpec: corruption_fraction must be in [0, 1)");
    if (!(corruption_magnitude > 0.0))
        throw std::invalid_argument("SyntheticSpec: corruption_magnitude must be positive");
    if (!(observe_fraction > 0.0 && observe_fraction <= 1.0))
        throw std::invalid_argument("SyntheticSpec: observe_fraction must be in (0, 1]");
}

namespace {

// First `count` positions of a partial Fisher-Yates shuffle over all cells.
std::vector<std::int64_t> sample_without_replacement(std::int64_t total, std::int64_t count,
                                                     Rng& rng) {
    std::vector<std::int64_t> cells(total);
    for (std::int64_t i = 0; i < total; ++i) cells[i] = i;
    for (std::int64_t i = 0; i < count; ++i) {
        const std::int64_t j =
            i + static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(total - i)));
        std::swap(cells[i], cells[j]);
    }
    cells.resize(count);
    return cells;
}

}  // namespace

GroundTruth generate(const SyntheticSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    const std::int64_t total = static_cast<std::int64_t>(spec.m) * spec.n;

    const DenseMatrix l = gaussian_matrix(spec.m, spec.true_rank, rng);
    const DenseMatrix r = gaussian_matrix(spec.n, spec.true_rank, rng);
    const DenseMatrix x_true =
        scale(multiply_nt(l, r), 1.0 / std::sqrt(static_cast<double>(spec.true_rank)));

    DenseMatrix s_true(spec.m, spec.n);
    const std::int64_t corrupted =
        static_cast<std::int64_t>(std::llround(spec.corruption_fraction * total));
    for (std::int64_t cell : sample_without_replacement(total, corrupted, rng)) {
        const int i = static_cast<int>(cell / spec.n);
        const int j = static_cast<int>(cell % spec.n);
        s_true(i, j) = rng.uniform(-spec.corruption_magnitude, spec.corruption_magnitude);
    }

    const std::int64_t observed =
        static_cast<std::int64_t>(std::llround(spec.observe_fraction * total));
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(observed);
    for (std::int64_t cell : sample_without_replacement(total, observed, rng))
        pairs.emplace_back(static_cast<int>(cell / spec.n), static_cast<int>(cell % spec.n));

    GroundTruth truth{x_true, s_true, add(x_true, s_true),
                      ObservationMask(spec.m, spec.n, std::move(pairs))};
    return truth;
}

RecoveryMetrics recovery_metrics(const GroundTruth& truth, const DenseMatrix& x_hat,
                                 const DenseMatrix& s_hat) {
    if (!x_hat.same_shape(truth.X_true) || !s_hat.same_shape(truth.S_true))
        throw std::invalid_argument("recovery_metrics: shape mismatch");

    RecoveryMetrics out;
    const double x_norm = frobenius_norm(truth.X_true);
    out.rel_error_x = frobenius_norm(sub(x_hat, truth.X_true)) / (x_norm > 0.0 ? x_norm : 1.0);
    out.rel_error_s =
        frobenius_norm(sub(s_hat, truth.S_true)) / (1.0 + frobenius_norm(truth.S_true));
    out.rank_x = numerical_rank(singular_values(x_hat), 1e-6);

    const double threshold = 1e-6 * max_abs(truth.S_true);
    std::int64_t tp = 0, fp = 0, fn = 0;
    for (int i = 0; i < truth.S_true.rows(); ++i) {
        for (int j = 0; j < truth.S_true.cols(); ++j) {
            const bool truly = std::fabs(truth.S_true(i, j)) > threshold;
            const bool predicted = std::fabs(s_hat(i, j)) > threshold;
            tp += truly && predicted;
            fp += !truly && predicted;
            fn += truly && !predicted;
        }
    }
    out.support_precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 1.0;
    out.support_recall = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 1.0;
    return out;
}

}  // namespace wfrpca
