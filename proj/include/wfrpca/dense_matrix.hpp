#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wfrpca {

// Dense real matrix, row-major. The single value type shared by the whole
// library: observations, factors, sparse parts and duals are all DenseMatrix.
class DenseMatrix {
public:
    DenseMatrix() = default;

    // Zero matrix of the given shape.
    DenseMatrix(int rows, int cols);

    // Takes ownership of `entries` (row-major, rows*cols values). Throws
    // std::invalid_argument on shape mismatch or non-finite entries.
    DenseMatrix(int rows, int cols, std::vector<double> entries);

    static DenseMatrix identity(int n);
    static DenseMatrix diagonal(std::span<const double> values);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    const double* data() const { return data_.data(); }
    double* data() { return data_.data(); }

    bool same_shape(const DenseMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }
    bool is_finite() const;

    bool operator==(const DenseMatrix& other) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

// Matrix kernels. The hot inner loops (products, entrywise maps) are
// OpenMP-parallel; each output element is written by exactly one thread in
// the same order as the serial code, so results are bit-identical to the
// wfrpca::serial reference implementations below. Reductions (norms, dots)
// stay serial so runs reproduce bit-for-bit regardless of thread count.

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);     // A * B
DenseMatrix multiply_nt(const DenseMatrix& a, const DenseMatrix& b);  // A * B'
DenseMatrix multiply_tn(const DenseMatrix& a, const DenseMatrix& b);  // A' * B

DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix sub(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix scale(const DenseMatrix& a, double c);
// a + c*b
DenseMatrix add_scaled(const DenseMatrix& a, double c, const DenseMatrix& b);
// A * diag(d) for d of length cols(a)
DenseMatrix scale_columns(const DenseMatrix& a, std::span<const double> d);

double frobenius_norm(const DenseMatrix& a);
double dot(const DenseMatrix& a, const DenseMatrix& b);
double max_abs(const DenseMatrix& a);

// Serial reference kernels, kept for correctness tests and the benchmark.
namespace serial {
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix multiply_nt(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix multiply_tn(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix add_scaled(const DenseMatrix& a, double c, const DenseMatrix& b);
DenseMatrix scale_columns(const DenseMatrix& a, std::span<const double> d);
}  // namespace serial

}  // namespace wfrpca
