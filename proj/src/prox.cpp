#include "wfrpca/prox.hpp"

#include <cmath>
#include <stdexcept>

#include "wfrpca/linalg.hpp"

namespace wfrpca {

namespace {

void check_step(double t, const char* who) {
    if (!(t > 0.0)) throw std::invalid_argument(std::string(who) + ": step must be positive");
}

DenseMatrix spectral_map(const DenseMatrix& y, auto&& scalar_op) {
    SvdTriple ysvd = svd(y);
    for (double& s : ysvd.singular_values) s = scalar_op(s);
    return ysvd.reconstruct();
}

}  // namespace

double soft_threshold(double y, double t) {
    check_step(t, "soft_threshold");
    const double mag = std::fabs(y) - t;
    if (mag <= 0.0) return 0.0;
    return y > 0.0 ? mag : -mag;
}

DenseMatrix soft_threshold(const DenseMatrix& y, double t) {
    check_step(t, "soft_threshold");
    DenseMatrix out(y.rows(), y.cols());
    const long n = static_cast<long>(y.size());
#pragma omp parallel for schedule(static) if (n >= 16 * 1024)
    for (long i = 0; i < n; ++i) {
        const double v = y.data()[i];
        const double mag = std::fabs(v) - t;
        out.data()[i] = mag <= 0.0 ? 0.0 : (v > 0.0 ? mag : -mag);
    }
    return out;
}

DenseMatrix prox_fro_squared(const DenseMatrix& y, double alpha, double t) {
    check_step(t, "prox_fro_squared");
    if (!(alpha > 0.0)) throw std::invalid_argument("prox_fro_squared: alpha must be positive");
    return scale(y, 1.0 / (1.0 + 2.0 * alpha * t));
}

DenseMatrix svt(const DenseMatrix& y, double tau) {
    check_step(tau, "svt");
    return spectral_map(y, [tau](double s) { return s > tau ? s - tau : 0.0; });
}

double lsvt_scalar(double y, double t, double eps) {
    check_step(t, "lsvt_scalar");
    if (!(eps > 0.0)) throw std::invalid_argument("lsvt_scalar: eps must be positive");
    if (y < 0.0) throw std::invalid_argument("lsvt_scalar: y must be nonnegative");
    const double disc = (y - eps) * (y - eps) - 4.0 * (t - y * eps);
    if (disc <= 0.0) return 0.0;
    const double candidate = 0.5 * (y - eps + std::sqrt(disc));
    if (candidate <= 0.0) return 0.0;
    const double f_zero = 0.5 * y * y + t * std::log(eps);
    const double f_candidate =
        0.5 * (candidate - y) * (candidate - y) + t * std::log(candidate + eps);
    return f_candidate < f_zero ? candidate : 0.0;
}

DenseMatrix lsvt(const DenseMatrix& y, double t, double eps) {
    check_step(t, "lsvt");
    return spectral_map(y, [t, eps](double s) { return lsvt_scalar(s, t, eps); });
}

DenseMatrix prox_regularizer(const DenseMatrix& y, const Regularizer& reg, ProxSide side,
                             double t) {
    check_step(t, "prox_regularizer");
    switch (reg.kind) {
        case RegKind::WeightedNuclear: return prox_fro_squared(y, 0.5, t);
        case RegKind::WeightedSchattenHalf: return svt(y, 0.5 * t);
        case RegKind::WeightedSchattenTwoThirds:
            return side == ProxSide::FactorA ? prox_fro_squared(y, 1.0 / 3.0, t)
                                             : svt(y, 2.0 * t / 3.0);
        case RegKind::WeightedLog: return lsvt(y, 0.5 * t, reg.eps_log);
    }
    throw std::logic_error("prox_regularizer: unreachable");
}

}  // namespace wfrpca
