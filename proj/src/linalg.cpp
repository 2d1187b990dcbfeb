#include "wfrpca/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <string>

namespace wfrpca {

namespace {

using EigenRowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenRowMajor> as_eigen(const DenseMatrix& m) {
    return {m.data(), m.rows(), m.cols()};
}

DenseMatrix from_eigen(const Eigen::MatrixXd& m) {
    DenseMatrix out(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    for (int i = 0; i < out.rows(); ++i)
        for (int j = 0; j < out.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

}  // namespace

DenseMatrix SvdTriple::reconstruct() const {
    DenseMatrix us = scale_columns(U, singular_values);
    return multiply_nt(us, V);
}

SvdTriple svd(const DenseMatrix& x) {
    if (!x.is_finite()) throw std::invalid_argument("svd: non-finite input");
    Eigen::JacobiSVD<Eigen::MatrixXd> solver(as_eigen(x),
                                             Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (solver.info() != Eigen::Success) throw NumericalError("svd: iteration failed to converge");

    Eigen::MatrixXd u = solver.matrixU();
    Eigen::MatrixXd v = solver.matrixV();
    const Eigen::VectorXd& s = solver.singularValues();

    // Sign convention: make the largest-magnitude entry of each U column
    // positive (first such entry on ties).
    for (int j = 0; j < u.cols(); ++j) {
        int arg = 0;
        double best = 0.0;
        for (int i = 0; i < u.rows(); ++i) {
            const double a = std::fabs(u(i, j));
            if (a > best) {
                best = a;
                arg = i;
            }
        }
        if (u(arg, j) < 0.0) {
            u.col(j) = -u.col(j);
            v.col(j) = -v.col(j);
        }
    }

    SvdTriple out;
    out.U = from_eigen(u);
    out.V = from_eigen(v);
    out.singular_values.assign(s.data(), s.data() + s.size());
    return out;
}

std::vector<double> singular_values(const DenseMatrix& x) {
    Eigen::JacobiSVD<Eigen::MatrixXd> solver(as_eigen(x));
    if (solver.info() != Eigen::Success) throw NumericalError("svd: iteration failed to converge");
    const Eigen::VectorXd& s = solver.singularValues();
    return {s.data(), s.data() + s.size()};
}

double spectral_norm(const DenseMatrix& x) {
    const std::vector<double> s = singular_values(x);
    return s.empty() ? 0.0 : s.front();
}

int numerical_rank(const std::vector<double>& sigma, double rel_tol) {
    if (sigma.empty()) return 0;
    const double cut = rel_tol * sigma.front();
    int rank = 0;
    for (double s : sigma)
        if (s > cut) ++rank;
    return rank;
}

DenseMatrix solve_spd_right(const DenseMatrix& r, const DenseMatrix& g) {
    if (g.rows() != g.cols() || r.cols() != g.rows())
        throw std::invalid_argument("solve_spd_right: shape mismatch");
    Eigen::MatrixXd gd = as_eigen(g);
    Eigen::LLT<Eigen::MatrixXd> llt(gd);
    if (llt.info() != Eigen::Success)
        throw NumericalError("solve_spd_right: matrix not positive definite");
    // Z G = R  <=>  G Z' = R' (G symmetric).
    Eigen::MatrixXd zt = llt.solve(Eigen::MatrixXd(as_eigen(r).transpose()));
    return from_eigen(zt.transpose());
}

DenseMatrix random_stiefel(int n, int r, RngSeed seed) {
    if (r < 1 || n < r)
        throw std::invalid_argument("random_stiefel: need n >= r >= 1, got n=" +
                                    std::to_string(n) + " r=" + std::to_string(r));
    Rng rng(seed);
    DenseMatrix g = gaussian_matrix(n, r, rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd(as_eigen(g)));
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, r);
    Eigen::MatrixXd rr = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    // Fix the QR sign ambiguity so the map from Gaussian sample to point is
    // unique and the distribution is exactly rotation invariant.
    for (int j = 0; j < r; ++j)
        if (rr(j, j) < 0.0) q.col(j) = -q.col(j);
    return from_eigen(q);
}

}  // namespace wfrpca
