#include "wfrpca/admm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "wfrpca/io.hpp"
#include "wfrpca/linalg.hpp"

namespace wfrpca {

void RpcaProblem::validate() const {
    if (mask.rows() != M.rows() || mask.cols() != M.cols())
        throw std::invalid_argument("RpcaProblem: mask dimensions do not match M");
    if (!(lambda > 0.0)) throw std::invalid_argument("RpcaProblem: lambda must be positive");
    if (r < 1 || r > std::min(M.rows(), M.cols()))
        throw std::invalid_argument("RpcaProblem: need 1 <= r <= min(m, n)");
    if (W.size() != r) throw std::invalid_argument("RpcaProblem: len(W) must equal r");
    if (reg.kind == RegKind::WeightedLog && !(reg.eps_log > 0.0))
        throw std::invalid_argument("RpcaProblem: eps_log must be positive");
}

double default_lambda(int m, int n) { return 1.0 / std::sqrt(static_cast<double>(std::max(m, n))); }

void SolverConfig::validate() const {
    if (!(rho0 > 0.0)) throw std::invalid_argument("SolverConfig: rho0 must be positive");
    if (!(mu > 1.0)) throw std::invalid_argument("SolverConfig: mu must exceed 1");
    if (!(rho_max >= rho0)) throw std::invalid_argument("SolverConfig: rho_max must be >= rho0");
    if (max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be positive");
    if (!(tol_primal > 0.0)) throw std::invalid_argument("SolverConfig: tol_primal must be positive");
}

bool SolverState::is_finite() const {
    return A.is_finite() && B.is_finite() && S.is_finite() && X.is_finite() &&
           A_hat.is_finite() && B_hat.is_finite() && Y1.is_finite() && Y2.is_finite() &&
           Y3.is_finite() && Y4.is_finite() && std::isfinite(rho);
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::Converged: return "converged";
        case Termination::MaxIter: return "max_iter";
        case Termination::RhoCapped: return "rho_capped";
        case Termination::NumericalFailure: return "numerical_failure";
    }
    return "unknown";
}

SolverState init_state(const RpcaProblem& p, const SolverConfig& cfg) {
    p.validate();
    cfg.validate();
    const int m = p.M.rows(), n = p.M.cols(), r = p.r;

    SolverState st;
    st.X = project_mask(p.M, p.mask, true);
    st.S = DenseMatrix(m, n);
    st.Y1 = DenseMatrix(m, r);
    st.Y2 = DenseMatrix(n, r);
    st.Y3 = DenseMatrix(m, n);
    st.Y4 = DenseMatrix(m, n);
    st.rho = cfg.rho0;
    st.iter = 0;

    if (cfg.init_kind == InitKind::SvdOfObserved) {
        const SvdTriple obs = svd(st.X);
        st.A = DenseMatrix(m, r);
        st.B = DenseMatrix(n, r);
        for (int j = 0; j < r; ++j) {
            const double root = std::sqrt(obs.singular_values[j]);
            for (int i = 0; i < m; ++i) st.A(i, j) = obs.U(i, j) * root;
            for (int i = 0; i < n; ++i) st.B(i, j) = obs.V(i, j) * root;
        }
    } else {
        Rng rng(cfg.seed);
        const double scale_factor = 1.0 / std::sqrt(static_cast<double>(r));
        st.A = scale(gaussian_matrix(m, r, rng), scale_factor);
        st.B = scale(gaussian_matrix(n, r, rng), scale_factor);
    }
    st.A_hat = scale_columns(st.A, p.W.inverse());
    st.B_hat = st.B;
    return st;
}

DenseMatrix update_A(const SolverState& st, const RpcaProblem& p) {
    const std::vector<double> winv = p.W.inverse();
    // G = rho (B'B + W^{-2})
    DenseMatrix g = multiply_tn(st.B, st.B);
    for (int i = 0; i < p.r; ++i) g(i, i) += winv[i] * winv[i];
    g = scale(g, st.rho);
    // R = rho X B + (rho A_hat + Y1) W^{-1} - Y3 B
    DenseMatrix rhs = scale(multiply(st.X, st.B), st.rho);
    rhs = add(rhs, scale_columns(add_scaled(scale(st.A_hat, st.rho), 1.0, st.Y1), winv));
    rhs = add_scaled(rhs, -1.0, multiply(st.Y3, st.B));
    return solve_spd_right(rhs, g);
}

DenseMatrix update_B(const SolverState& st, const RpcaProblem& p) {
    // G = rho (A'A + I)
    DenseMatrix g = multiply_tn(st.A, st.A);
    for (int i = 0; i < p.r; ++i) g(i, i) += 1.0;
    g = scale(g, st.rho);
    // R = rho X'A + rho B_hat + Y2 - Y3'A
    DenseMatrix rhs = scale(multiply_tn(st.X, st.A), st.rho);
    rhs = add(rhs, add_scaled(scale(st.B_hat, st.rho), 1.0, st.Y2));
    rhs = add_scaled(rhs, -1.0, multiply_tn(st.Y3, st.A));
    return solve_spd_right(rhs, g);
}

DenseMatrix update_S(const SolverState& st, const RpcaProblem& p) {
    const int m = p.M.rows(), n = p.M.cols();
    const double inv_rho = 1.0 / st.rho;
    DenseMatrix s(m, n);
#pragma omp parallel for schedule(static) if (static_cast<long>(m) * n >= 16 * 1024)
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            const double target = p.M(i, j) - st.X(i, j) - st.Y4(i, j) * inv_rho;
            if (p.mask.observed(i, j)) {
                const double mag = std::fabs(target) - inv_rho;
                s(i, j) = mag <= 0.0 ? 0.0 : (target > 0.0 ? mag : -mag);
            } else {
                s(i, j) = target;
            }
        }
    }
    return s;
}

DenseMatrix update_X(const SolverState& st, const RpcaProblem& p) {
    // X = (Y3 - Y4 + rho A B' + rho (M - S)) / (2 rho)
    DenseMatrix num = sub(st.Y3, st.Y4);
    num = add_scaled(num, st.rho, multiply_nt(st.A, st.B));
    num = add_scaled(num, st.rho, sub(p.M, st.S));
    return scale(num, 1.0 / (2.0 * st.rho));
}

DenseMatrix update_A_hat(const SolverState& st, const RpcaProblem& p) {
    DenseMatrix arg = scale_columns(st.A, p.W.inverse());
    arg = add_scaled(arg, -1.0 / st.rho, st.Y1);
    return prox_regularizer(arg, p.reg, ProxSide::FactorA, p.lambda / st.rho);
}

DenseMatrix update_B_hat(const SolverState& st, const RpcaProblem& p) {
    DenseMatrix arg = add_scaled(st.B, -1.0 / st.rho, st.Y2);
    return prox_regularizer(arg, p.reg, ProxSide::FactorB, p.lambda / st.rho);
}

DualUpdate update_duals(const SolverState& st, const RpcaProblem& p, const SolverConfig& cfg) {
    DualUpdate d{st.Y1, st.Y2, st.Y3, st.Y4, st.rho};
    d.Y1 = add_scaled(st.Y1, st.rho, sub(st.A_hat, scale_columns(st.A, p.W.inverse())));
    d.Y2 = add_scaled(st.Y2, st.rho, sub(st.B_hat, st.B));
    d.Y3 = add_scaled(st.Y3, st.rho, sub(multiply_nt(st.A, st.B), st.X));
    d.Y4 = add_scaled(st.Y4, st.rho, sub(add(st.X, st.S), p.M));
    d.rho = std::min(cfg.mu * st.rho, cfg.rho_max);
    return d;
}

namespace {

double penalty_value(const DenseMatrix& z, const Regularizer& reg, ProxSide side) {
    switch (reg.kind) {
        case RegKind::WeightedNuclear: {
            const double f = frobenius_norm(z);
            return 0.5 * f * f;
        }
        case RegKind::WeightedSchattenHalf: {
            double nuc = 0.0;
            for (double s : singular_values(z)) nuc += s;
            return 0.5 * nuc;
        }
        case RegKind::WeightedSchattenTwoThirds: {
            if (side == ProxSide::FactorA) {
                const double f = frobenius_norm(z);
                return f * f / 3.0;
            }
            double nuc = 0.0;
            for (double s : singular_values(z)) nuc += s;
            return 2.0 * nuc / 3.0;
        }
        case RegKind::WeightedLog: return 0.5 * log_norm(z, reg.eps_log);
    }
    throw std::logic_error("penalty_value: unreachable");
}

double masked_l1(const DenseMatrix& s, const ObservationMask& mask) {
    double sum = 0.0;
    for (const auto& [i, j] : mask.pairs()) sum += std::fabs(s(i, j));
    return sum;
}

struct ConstraintGaps {
    DenseMatrix factor_a;  // A_hat - A W^{-1}
    DenseMatrix factor_b;  // B_hat - B
    DenseMatrix bilinear;  // A B' - X
    DenseMatrix data;      // X + S - M
};

ConstraintGaps constraint_gaps(const SolverState& st, const RpcaProblem& p) {
    return {sub(st.A_hat, scale_columns(st.A, p.W.inverse())), sub(st.B_hat, st.B),
            sub(multiply_nt(st.A, st.B), st.X), sub(add(st.X, st.S), p.M)};
}

}  // namespace

double augmented_lagrangian(const SolverState& st, const RpcaProblem& p) {
    const ConstraintGaps gaps = constraint_gaps(st, p);
    double value = p.lambda * (penalty_value(st.A_hat, p.reg, ProxSide::FactorA) +
                               penalty_value(st.B_hat, p.reg, ProxSide::FactorB));
    value += masked_l1(st.S, p.mask);
    value += dot(st.Y1, gaps.factor_a) + dot(st.Y2, gaps.factor_b) + dot(st.Y3, gaps.bilinear) +
             dot(st.Y4, gaps.data);
    const double fa = frobenius_norm(gaps.factor_a);
    const double fb = frobenius_norm(gaps.factor_b);
    const double fx = frobenius_norm(gaps.bilinear);
    const double fd = frobenius_norm(gaps.data);
    value += 0.5 * st.rho * (fa * fa + fb * fb + fx * fx + fd * fd);
    return value;
}

std::array<double, 4> relative_residuals(const SolverState& st, const RpcaProblem& p) {
    const ConstraintGaps gaps = constraint_gaps(st, p);
    const double denom = 1.0 + frobenius_norm(p.M);
    return {frobenius_norm(gaps.factor_a) / denom, frobenius_norm(gaps.factor_b) / denom,
            frobenius_norm(gaps.bilinear) / denom, frobenius_norm(gaps.data) / denom};
}

SolveReport solve(const RpcaProblem& p, const SolverConfig& cfg) {
    SolverState st = init_state(p, cfg);
    return solve_with_state(p, cfg, st);
}

SolveReport solve_with_state(const RpcaProblem& p, const SolverConfig& cfg, SolverState& st) {
    p.validate();
    cfg.validate();

    SolveReport report;
    report.history.reserve(cfg.max_iter);

    // Stall detection once rho has hit its cap: stop after 50 consecutive
    // iterations without improvement of the worst residual.
    constexpr int kCapStallLimit = 50;
    int capped_stall = 0;
    double best_capped_max_res = std::numeric_limits<double>::infinity();

    Termination termination = Termination::MaxIter;
    int iterations = 0;

    for (int k = 0; k < cfg.max_iter; ++k) {
        const double rho_used = st.rho;
        try {
            st.A = update_A(st, p);
            st.B = update_B(st, p);
            st.S = update_S(st, p);
            st.X = update_X(st, p);
            st.A_hat = update_A_hat(st, p);
            st.B_hat = update_B_hat(st, p);
            const DualUpdate d = update_duals(st, p, cfg);
            st.Y1 = d.Y1;
            st.Y2 = d.Y2;
            st.Y3 = d.Y3;
            st.Y4 = d.Y4;
            st.rho = d.rho;
        } catch (const NumericalError&) {
            termination = Termination::NumericalFailure;
            iterations = k;
            break;
        }
        st.iter = k + 1;
        iterations = k + 1;

        if (!st.is_finite()) {
            termination = Termination::NumericalFailure;
            break;
        }

        const std::array<double, 4> res = relative_residuals(st, p);
        HistoryRow row;
        row.iter = k;
        row.rho = rho_used;
        row.res_factor_a = res[0];
        row.res_factor_b = res[1];
        row.res_bilinear = res[2];
        row.res_data = res[3];
        row.lagrangian = augmented_lagrangian(st, p);
        row.y1_norm2 = spectral_norm(st.Y1);
        report.history.push_back(row);

        const double max_res = std::max({res[0], res[1], res[2], res[3]});
        if (max_res <= cfg.tol_primal) {
            termination = Termination::Converged;
            break;
        }
        if (rho_used >= cfg.rho_max) {
            if (max_res < best_capped_max_res) {
                best_capped_max_res = max_res;
                capped_stall = 0;
            } else if (++capped_stall >= kCapStallLimit) {
                termination = Termination::RhoCapped;
                break;
            }
        }
    }

    report.X_hat = st.X;
    report.S_hat = st.S;
    report.iterations = iterations;
    report.termination = termination;
    return report;
}

namespace {

// dist(G, set) for set = {sum_i g'(sigma_i) u_i v_i' + T : U1'T = 0, T V1 = 0,
// ||T||_2 <= ball}: block decomposition in the singular basis of z.
double spectral_set_distance(const DenseMatrix& g, const DenseMatrix& z,
                             const std::vector<double>& grad_diag, int rank, double ball) {
    const SvdTriple zsvd = svd(z);
    double dist_sq = 0.0;

    DenseMatrix corner = g;
    if (rank > 0) {
        DenseMatrix u1(z.rows(), rank), v1(z.cols(), rank);
        for (int i = 0; i < z.rows(); ++i)
            for (int j = 0; j < rank; ++j) u1(i, j) = zsvd.U(i, j);
        for (int i = 0; i < z.cols(); ++i)
            for (int j = 0; j < rank; ++j) v1(i, j) = zsvd.V(i, j);

        const DenseMatrix gv1 = multiply(g, v1);        // m x p
        const DenseMatrix u1tg = multiply_tn(u1, g);    // p x n
        const DenseMatrix m11 = multiply_tn(u1, gv1);   // p x p

        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j) {
                const double want = (i == j) ? grad_diag[i] : 0.0;
                const double diff = m11(i, j) - want;
                dist_sq += diff * diff;
            }

        const DenseMatrix c1 = sub(u1tg, multiply_nt(m11, v1));  // U1'G (I - V1V1')
        const DenseMatrix c2 = sub(gv1, multiply(u1, m11));      // (I - U1U1')G V1
        const double c1n = frobenius_norm(c1);
        const double c2n = frobenius_norm(c2);
        dist_sq += c1n * c1n + c2n * c2n;

        corner = sub(corner, multiply(u1, u1tg));
        corner = sub(corner, multiply_nt(gv1, v1));
        corner = add(corner, multiply_nt(multiply(u1, m11), v1));
    }

    for (double s : singular_values(corner)) {
        const double excess = s - ball;
        if (excess > 0.0) dist_sq += excess * excess;
    }
    return std::sqrt(dist_sq);
}

}  // namespace

double subdiff_distance(const DenseMatrix& target, const DenseMatrix& z, const Regularizer& reg,
                        ProxSide side, double lambda) {
    switch (reg.kind) {
        case RegKind::WeightedNuclear:
            return frobenius_norm(add_scaled(target, -lambda, z));
        case RegKind::WeightedSchattenTwoThirds:
            if (side == ProxSide::FactorA)
                return frobenius_norm(add_scaled(target, -2.0 * lambda / 3.0, z));
            break;
        default: break;
    }

    const std::vector<double> sigma = singular_values(z);
    const int rank = numerical_rank(sigma, kRankRelTol);
    std::vector<double> grad(rank);
    double ball = 0.0;
    if (reg.kind == RegKind::WeightedLog) {
        const double c = 0.5 * lambda;
        for (int i = 0; i < rank; ++i) grad[i] = c / (sigma[i] + reg.eps_log);
        ball = c / reg.eps_log;
    } else {
        // Nuclear-type penalty with coefficient 1/2 (Schatten-1/2 sides) or
        // 2/3 (Schatten-2/3 factor B).
        const double c =
            (reg.kind == RegKind::WeightedSchattenTwoThirds) ? 2.0 * lambda / 3.0 : 0.5 * lambda;
        for (int i = 0; i < rank; ++i) grad[i] = c;
        ball = c;
    }
    return spectral_set_distance(target, z, grad, rank, ball);
}

KktReport kkt_residuals(const SolverState& st, const RpcaProblem& p) {
    const ConstraintGaps gaps = constraint_gaps(st, p);
    KktReport out;
    out.feas_factor_a = frobenius_norm(gaps.factor_a);
    out.feas_factor_b = frobenius_norm(gaps.factor_b);
    out.feas_bilinear = frobenius_norm(gaps.bilinear);
    out.feas_data = frobenius_norm(gaps.data);
    out.stationarity_a_hat =
        subdiff_distance(scale(st.Y1, -1.0), st.A_hat, p.reg, ProxSide::FactorA, p.lambda);
    out.stationarity_b_hat =
        subdiff_distance(scale(st.Y2, -1.0), st.B_hat, p.reg, ProxSide::FactorB, p.lambda);
    out.y4_complement = frobenius_norm(project_mask(st.Y4, p.mask, false));
    double worst = 0.0;
    for (const auto& [i, j] : p.mask.pairs()) {
        const double s = st.S(i, j);
        const double y = st.Y4(i, j);
        const double v = (s != 0.0) ? std::fabs(y + (s > 0.0 ? 1.0 : -1.0))
                                    : std::max(std::fabs(y) - 1.0, 0.0);
        worst = std::max(worst, v);
    }
    out.s_stationarity = worst;
    return out;
}

void write_history(const SolveReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << "# iter rho res_factor_a res_factor_b res_bilinear res_data lagrangian y1_norm2\n";
    for (const HistoryRow& row : report.history) {
        out << row.iter << ' ' << format_full(row.rho) << ' ' << format_full(row.res_factor_a)
            << ' ' << format_full(row.res_factor_b) << ' ' << format_full(row.res_bilinear) << ' '
            << format_full(row.res_data) << ' ' << format_full(row.lagrangian) << ' '
            << format_full(row.y1_norm2) << '\n';
    }
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace wfrpca
