#include "wfrpca/dense_matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wfrpca {

namespace {

void check_shape(int rows, int cols) {
    if (rows <= 0 || cols <= 0)
        throw std::invalid_argument("DenseMatrix: dimensions must be positive, got " +
                                    std::to_string(rows) + "x" + std::to_string(cols));
}

void check_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
    if (!a.same_shape(b))
        throw std::invalid_argument(std::string(op) + ": shape mismatch " +
                                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                    " vs " + std::to_string(b.rows()) + "x" +
                                    std::to_string(b.cols()));
}

// Work threshold below which the OpenMP kernels run single-threaded.
constexpr long kParallelGrain = 16 * 1024;

}  // namespace

DenseMatrix::DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    check_shape(rows, cols);
    data_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
}

DenseMatrix::DenseMatrix(int rows, int cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    check_shape(rows, cols);
    if (data_.size() != static_cast<std::size_t>(rows) * cols)
        throw std::invalid_argument("DenseMatrix: entry count " + std::to_string(data_.size()) +
                                    " does not match " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
    if (!is_finite())
        throw std::invalid_argument("DenseMatrix: non-finite entry");
}

DenseMatrix DenseMatrix::identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> values) {
    const int n = static_cast<int>(values.size());
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = values[i];
    return m;
}

bool DenseMatrix::is_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("multiply: inner dimension mismatch");
    const int m = a.rows(), k = a.cols(), n = b.cols();
    DenseMatrix c(m, n);
#pragma omp parallel for schedule(static) if (static_cast<long>(m) * n * k >= kParallelGrain)
    for (int i = 0; i < m; ++i) {
        double* ci = c.data() + static_cast<std::size_t>(i) * n;
        const double* ai = a.data() + static_cast<std::size_t>(i) * k;
        for (int l = 0; l < k; ++l) {
            const double ail = ai[l];
            const double* bl = b.data() + static_cast<std::size_t>(l) * n;
            for (int j = 0; j < n; ++j) ci[j] += ail * bl[j];
        }
    }
    return c;
}

DenseMatrix multiply_nt(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("multiply_nt: inner dimension mismatch");
    const int m = a.rows(), k = a.cols(), n = b.rows();
    DenseMatrix c(m, n);
#pragma omp parallel for schedule(static) if (static_cast<long>(m) * n * k >= kParallelGrain)
    for (int i = 0; i < m; ++i) {
        double* ci = c.data() + static_cast<std::size_t>(i) * n;
        const double* ai = a.data() + static_cast<std::size_t>(i) * k;
        for (int j = 0; j < n; ++j) {
            const double* bj = b.data() + static_cast<std::size_t>(j) * k;
            double s = 0.0;
            for (int l = 0; l < k; ++l) s += ai[l] * bj[l];
            ci[j] = s;
        }
    }
    return c;
}

DenseMatrix multiply_tn(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("multiply_tn: inner dimension mismatch");
    const int m = a.cols(), k = a.rows(), n = b.cols();
    DenseMatrix c(m, n);
#pragma omp parallel for schedule(static) if (static_cast<long>(m) * n * k >= kParallelGrain)
    for (int i = 0; i < m; ++i) {
        double* ci = c.data() + static_cast<std::size_t>(i) * n;
        for (int l = 0; l < k; ++l) {
            const double ali = a(l, i);
            const double* bl = b.data() + static_cast<std::size_t>(l) * n;
            for (int j = 0; j < n; ++j) ci[j] += ali * bl[j];
        }
    }
    return c;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) { return add_scaled(a, 1.0, b); }

DenseMatrix sub(const DenseMatrix& a, const DenseMatrix& b) { return add_scaled(a, -1.0, b); }

DenseMatrix scale(const DenseMatrix& a, double c) {
    DenseMatrix r(a.rows(), a.cols());
    const long n = static_cast<long>(a.size());
#pragma omp parallel for schedule(static) if (n >= kParallelGrain)
    for (long i = 0; i < n; ++i) r.data()[i] = c * a.data()[i];
    return r;
}

DenseMatrix add_scaled(const DenseMatrix& a, double c, const DenseMatrix& b) {
    check_same_shape(a, b, "add_scaled");
    DenseMatrix r(a.rows(), a.cols());
    const long n = static_cast<long>(a.size());
#pragma omp parallel for schedule(static) if (n >= kParallelGrain)
    for (long i = 0; i < n; ++i) r.data()[i] = a.data()[i] + c * b.data()[i];
    return r;
}

DenseMatrix scale_columns(const DenseMatrix& a, std::span<const double> d) {
    if (static_cast<int>(d.size()) != a.cols())
        throw std::invalid_argument("scale_columns: diagonal length mismatch");
    DenseMatrix r(a.rows(), a.cols());
    const int m = a.rows(), n = a.cols();
#pragma omp parallel for schedule(static) if (static_cast<long>(m) * n >= kParallelGrain)
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) r(i, j) = a(i, j) * d[j];
    return r;
}

double frobenius_norm(const DenseMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.data()[i] * a.data()[i];
    return std::sqrt(s);
}

double dot(const DenseMatrix& a, const DenseMatrix& b) {
    check_same_shape(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.data()[i] * b.data()[i];
    return s;
}

double max_abs(const DenseMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::fabs(a.data()[i]));
    return s;
}

namespace serial {

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("multiply: inner dimension mismatch");
    const int m = a.rows(), k = a.cols(), n = b.cols();
    DenseMatrix c(m, n);
    for (int i = 0; i < m; ++i) {
        double* ci = c.data() + static_cast<std::size_t>(i) * n;
        const double* ai = a.data() + static_cast<std::size_t>(i) * k;
        for (int l = 0; l < k; ++l) {
            const double ail = ai[l];
            const double* bl = b.data() + static_cast<std::size_t>(l) * n;
            for (int j = 0; j < n; ++j) ci[j] += ail * bl[j];
        }
    }
    return c;
}

DenseMatrix multiply_nt(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("multiply_nt: inner dimension mismatch");
    const int m = a.rows(), k = a.cols(), n = b.rows();
    DenseMatrix c(m, n);
    for (int i = 0; i < m; ++i) {
        double* ci = c.data() + static_cast<std::size_t>(i) * n;
        const double* ai = a.data() + static_cast<std::size_t>(i) * k;
        for (int j = 0; j < n; ++j) {
            const double* bj = b.data() + static_cast<std::size_t>(j) * k;
            double s = 0.0;
            for (int l = 0; l < k; ++l) s += ai[l] * bj[l];
            ci[j] = s;
        }
    }
    return c;
}

DenseMatrix multiply_tn(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("multiply_tn: inner dimension mismatch");
    const int m = a.cols(), k = a.rows(), n = b.cols();
    DenseMatrix c(m, n);
    for (int i = 0; i < m; ++i) {
        double* ci = c.data() + static_cast<std::size_t>(i) * n;
        for (int l = 0; l < k; ++l) {
            const double ali = a(l, i);
            const double* bl = b.data() + static_cast<std::size_t>(l) * n;
            for (int j = 0; j < n; ++j) ci[j] += ali * bl[j];
        }
    }
    return c;
}

DenseMatrix add_scaled(const DenseMatrix& a, double c, const DenseMatrix& b) {
    check_same_shape(a, b, "add_scaled");
    DenseMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) r.data()[i] = a.data()[i] + c * b.data()[i];
    return r;
}

DenseMatrix scale_columns(const DenseMatrix& a, std::span<const double> d) {
    if (static_cast<int>(d.size()) != a.cols())
        throw std::invalid_argument("scale_columns: diagonal length mismatch");
    DenseMatrix r(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) * d[j];
    return r;
}

}  // namespace serial

}  // namespace wfrpca
