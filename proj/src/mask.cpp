#include "wfrpca/mask.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace wfrpca {

ObservationMask::ObservationMask(int rows, int cols, std::vector<std::pair<int, int>> observed)
    : rows_(rows), cols_(cols), pairs_(std::move(observed)) {
    if (rows <= 0 || cols <= 0)
        throw std::invalid_argument("ObservationMask: dimensions must be positive");
    bitmap_.assign(static_cast<std::size_t>(rows) * cols, 0);
    std::sort(pairs_.begin(), pairs_.end());
    for (std::size_t k = 0; k < pairs_.size(); ++k) {
        const auto [i, j] = pairs_[k];
        if (i < 0 || i >= rows || j < 0 || j >= cols)
            throw std::invalid_argument("ObservationMask: index (" + std::to_string(i) + "," +
                                        std::to_string(j) + ") out of bounds");
        if (k > 0 && pairs_[k] == pairs_[k - 1])
            throw std::invalid_argument("ObservationMask: duplicate index (" + std::to_string(i) +
                                        "," + std::to_string(j) + ")");
        bitmap_[static_cast<std::size_t>(i) * cols + j] = 1;
    }
}

ObservationMask ObservationMask::full(int rows, int cols) {
    std::vector<std::pair<int, int>> all;
    all.reserve(static_cast<std::size_t>(rows) * cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) all.emplace_back(i, j);
    return {rows, cols, std::move(all)};
}

ObservationMask ObservationMask::empty(int rows, int cols) { return {rows, cols, {}}; }

DenseMatrix project_mask(const DenseMatrix& x, const ObservationMask& mask, bool keep_observed) {
    if (x.rows() != mask.rows() || x.cols() != mask.cols())
        throw std::invalid_argument("project_mask: dimension mismatch");
    DenseMatrix out(x.rows(), x.cols());
    const int m = x.rows(), n = x.cols();
#pragma omp parallel for schedule(static) if (static_cast<long>(m) * n >= 16 * 1024)
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            out(i, j) = (mask.observed(i, j) == keep_observed) ? x(i, j) : 0.0;
    return out;
}

}  // namespace wfrpca
