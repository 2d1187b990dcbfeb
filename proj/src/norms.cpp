#include "wfrpca/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "wfrpca/linalg.hpp"

namespace wfrpca {

namespace {

bool is_allowed_q(double q) {
    return q == 2.0 || q == 1.0 || q == 2.0 / 3.0 || q == 0.5;
}

// W must cover every nonzero singular value; trailing zeros need no weight.
void check_weight_coverage(const std::vector<double>& sigma, const WeightSpec& w) {
    const int rank = numerical_rank(sigma, kRankRelTol);
    if (w.size() < rank)
        throw std::invalid_argument("weights shorter than the number of nonzero singular values");
}

double nuclear_norm_of(const std::vector<double>& sigma) {
    double s = 0.0;
    for (double v : sigma) s += v;
    return s;
}

double fro_squared_of(const std::vector<double>& sigma) {
    double s = 0.0;
    for (double v : sigma) s += v * v;
    return s;
}

double log_norm_of(const std::vector<double>& sigma, double eps) {
    double s = 0.0;
    for (double v : sigma) s += std::log(v + eps);
    return s;
}

}  // namespace

Regularizer Regularizer::log(double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("Regularizer: eps_log must be positive");
    return {RegKind::WeightedLog, eps};
}

std::string to_string(RegKind kind) {
    switch (kind) {
        case RegKind::WeightedNuclear: return "nuclear";
        case RegKind::WeightedSchattenHalf: return "schatten_half";
        case RegKind::WeightedSchattenTwoThirds: return "schatten_two_thirds";
        case RegKind::WeightedLog: return "log";
    }
    return "unknown";
}

RegKind parse_reg_kind(const std::string& name) {
    if (name == "nuclear") return RegKind::WeightedNuclear;
    if (name == "schatten_half") return RegKind::WeightedSchattenHalf;
    if (name == "schatten_two_thirds") return RegKind::WeightedSchattenTwoThirds;
    if (name == "log") return RegKind::WeightedLog;
    throw std::invalid_argument("unknown regularizer kind '" + name +
                                "' (expected nuclear | schatten_half | schatten_two_thirds | log)");
}

double weighted_schatten_power(const DenseMatrix& x, const WeightSpec& w, double q) {
    if (!is_allowed_q(q))
        throw std::invalid_argument("weighted_schatten_power: q must be one of 2, 1, 2/3, 1/2");
    const std::vector<double> sigma = singular_values(x);
    check_weight_coverage(sigma, w);
    const double cut = sigma.empty() ? 0.0 : kRankRelTol * sigma.front();
    double sum = 0.0;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (sigma[i] <= cut) continue;
        sum += std::pow(sigma[i] / w[static_cast<int>(i)], q);
    }
    return sum;
}

double weighted_log_norm(const DenseMatrix& x, const WeightSpec& w, int k, double eps) {
    if (k != 1 && k != 2) throw std::invalid_argument("weighted_log_norm: k must be 1 or 2");
    if (!(eps > 0.0)) throw std::invalid_argument("weighted_log_norm: eps must be positive");
    const std::vector<double> sigma = singular_values(x);
    check_weight_coverage(sigma, w);
    const double cut = sigma.empty() ? 0.0 : kRankRelTol * sigma.front();
    double sum = 0.0;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (sigma[i] <= cut) {
            sum += std::log(eps);
        } else {
            const double ratio = sigma[i] / w[static_cast<int>(i)];
            sum += std::log(std::pow(ratio, 1.0 / k) + eps);
        }
    }
    return sum;
}

double log_norm(const DenseMatrix& x, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("log_norm: eps must be positive");
    return log_norm_of(singular_values(x), eps);
}

double surrogate_objective(const DenseMatrix& a, const DenseMatrix& b, const WeightSpec& w,
                           const Regularizer& reg) {
    if (a.cols() != w.size() || b.cols() != w.size())
        throw std::invalid_argument("surrogate_objective: factor width must equal len(W)");
    const DenseMatrix aw = scale_columns(a, w.inverse());
    switch (reg.kind) {
        case RegKind::WeightedNuclear:
            return 0.5 * fro_squared_of(singular_values(aw)) +
                   0.5 * fro_squared_of(singular_values(b));
        case RegKind::WeightedSchattenHalf:
            return 0.5 * nuclear_norm_of(singular_values(aw)) +
                   0.5 * nuclear_norm_of(singular_values(b));
        case RegKind::WeightedSchattenTwoThirds:
            return (fro_squared_of(singular_values(aw)) +
                    2.0 * nuclear_norm_of(singular_values(b))) /
                   3.0;
        case RegKind::WeightedLog:
            return 0.5 * log_norm(aw, reg.eps_log) + 0.5 * log_norm(b, reg.eps_log);
    }
    throw std::logic_error("surrogate_objective: unreachable");
}

double factorization_target(const DenseMatrix& x, const WeightSpec& w, const Regularizer& reg,
                            int r) {
    if (w.size() != r) throw std::invalid_argument("factorization_target: len(W) must equal r");
    switch (reg.kind) {
        case RegKind::WeightedNuclear: return weighted_schatten_power(x, w, 1.0);
        case RegKind::WeightedSchattenHalf: return weighted_schatten_power(x, w, 0.5);
        case RegKind::WeightedSchattenTwoThirds: return weighted_schatten_power(x, w, 2.0 / 3.0);
        case RegKind::WeightedLog: break;
    }
    const std::vector<double> sigma = singular_values(x);
    const int rank = numerical_rank(sigma, kRankRelTol);
    if (r < rank) throw std::invalid_argument("factorization_target: r below rank of X");
    double sum = 0.0;
    for (int i = 0; i < rank; ++i)
        sum += std::log(std::sqrt(sigma[i] / w[i]) + reg.eps_log);
    sum += (r - rank) * std::log(reg.eps_log);
    return sum;
}

FactorWitness build_witness(const DenseMatrix& x, const WeightSpec& w, const Regularizer& reg,
                            int r) {
    if (w.size() != r) throw std::invalid_argument("build_witness: len(W) must equal r");
    const SvdTriple xsvd = svd(x);
    const int rank = numerical_rank(xsvd.singular_values, kRankRelTol);
    if (r < rank) throw std::invalid_argument("build_witness: r below numerical rank of X");

    // Per-column scalings of U and V over the leading rank columns; the
    // remaining r - rank columns stay zero.
    std::vector<double> ua(rank), vb(rank);
    for (int i = 0; i < rank; ++i) {
        const double s = xsvd.singular_values[i];
        const double wi = w[i];
        if (reg.kind == RegKind::WeightedSchattenTwoThirds) {
            ua[i] = std::cbrt(s) * std::pow(wi, 2.0 / 3.0);
            vb[i] = std::cbrt(s * s) * std::pow(wi, -2.0 / 3.0);
        } else {
            ua[i] = std::sqrt(s * wi);
            vb[i] = std::sqrt(s / wi);
        }
    }

    FactorWitness witness{DenseMatrix(x.rows(), r), DenseMatrix(x.cols(), r)};
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < rank; ++j) witness.A_tilde(i, j) = xsvd.U(i, j) * ua[j];
    for (int i = 0; i < x.cols(); ++i)
        for (int j = 0; j < rank; ++j) witness.B_tilde(i, j) = xsvd.V(i, j) * vb[j];
    return witness;
}

}  // namespace wfrpca
