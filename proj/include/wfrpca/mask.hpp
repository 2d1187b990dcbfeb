#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "wfrpca/dense_matrix.hpp"

namespace wfrpca {

// Set of observed (row, col) positions of an m x n matrix. Stored both as a
// dense bitmap (O(1) membership) and as a sorted index list (enumeration and
// the text format).
class ObservationMask {
public:
    // Validates bounds and rejects duplicates.
    ObservationMask(int rows, int cols, std::vector<std::pair<int, int>> observed);

    static ObservationMask full(int rows, int cols);
    static ObservationMask empty(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::int64_t count() const { return static_cast<std::int64_t>(pairs_.size()); }

    bool observed(int i, int j) const {
        return bitmap_[static_cast<std::size_t>(i) * cols_ + j] != 0;
    }
    const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }

private:
    int rows_;
    int cols_;
    std::vector<std::pair<int, int>> pairs_;
    std::vector<std::uint8_t> bitmap_;
};

// Keeps entries on the mask (keep_observed) or on its complement, zeroing the
// rest.
DenseMatrix project_mask(const DenseMatrix& x, const ObservationMask& mask, bool keep_observed);

}  // namespace wfrpca
