#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "wfrpca/dense_matrix.hpp"
#include "wfrpca/mask.hpp"
#include "wfrpca/norms.hpp"
#include "wfrpca/prox.hpp"
#include "wfrpca/rng.hpp"
#include "wfrpca/weights.hpp"

namespace wfrpca {

// Recovery instance: observed data M on mask, sparsity weight lambda, factor
// width r with weights W, and the low-rank surrogate.
struct RpcaProblem {
    DenseMatrix M;
    ObservationMask mask;
    double lambda;
    int r;
    WeightSpec W;
    Regularizer reg;

    // Throws std::invalid_argument on any inconsistency.
    void validate() const;
};

// Conventional default lambda = 1 / sqrt(max(m, n)).
double default_lambda(int m, int n);

enum class InitKind { SvdOfObserved, SeededGaussian };

struct SolverConfig {
    double rho0 = 1e-2;
    double mu = 1.05;
    double rho_max = 1e8;
    int max_iter = 1000;
    double tol_primal = 1e-7;
    InitKind init_kind = InitKind::SvdOfObserved;
    RngSeed seed{0};

    void validate() const;
};

// All ten iterates of the augmented Lagrangian plus the penalty.
struct SolverState {
    DenseMatrix A;      // m x r
    DenseMatrix B;      // n x r
    DenseMatrix S;      // m x n
    DenseMatrix X;      // m x n
    DenseMatrix A_hat;  // m x r, relaxation of A W^{-1}
    DenseMatrix B_hat;  // n x r, relaxation of B
    DenseMatrix Y1;     // m x r
    DenseMatrix Y2;     // n x r
    DenseMatrix Y3;     // m x n
    DenseMatrix Y4;     // m x n
    double rho = 0.0;
    int iter = 0;

    bool is_finite() const;
};

enum class Termination { Converged, MaxIter, RhoCapped, NumericalFailure };

std::string to_string(Termination t);

struct HistoryRow {
    int iter;
    double rho;            // penalty used during this iteration
    double res_factor_a;   // ||A_hat - A W^{-1}||_F / (1 + ||M||_F)
    double res_factor_b;   // ||B_hat - B||_F / (1 + ||M||_F)
    double res_bilinear;   // ||A B' - X||_F / (1 + ||M||_F)
    double res_data;       // ||X + S - M||_F / (1 + ||M||_F)
    double lagrangian;
    double y1_norm2;       // spectral norm of Y1 after the dual step
};

struct SolveReport {
    DenseMatrix X_hat;
    DenseMatrix S_hat;
    int iterations = 0;
    Termination termination = Termination::MaxIter;
    std::vector<HistoryRow> history;
};

SolverState init_state(const RpcaProblem& p, const SolverConfig& cfg);

// Block updates. Each returns the exact minimizer of the augmented Lagrangian
// in its own variable with all others held at the values in `st`.
DenseMatrix update_A(const SolverState& st, const RpcaProblem& p);
DenseMatrix update_B(const SolverState& st, const RpcaProblem& p);
DenseMatrix update_S(const SolverState& st, const RpcaProblem& p);
DenseMatrix update_X(const SolverState& st, const RpcaProblem& p);
DenseMatrix update_A_hat(const SolverState& st, const RpcaProblem& p);
DenseMatrix update_B_hat(const SolverState& st, const RpcaProblem& p);

struct DualUpdate {
    DenseMatrix Y1, Y2, Y3, Y4;
    double rho;
};

// Ascent steps Y_i += rho * residual_i, then rho <- min(mu * rho, rho_max).
DualUpdate update_duals(const SolverState& st, const RpcaProblem& p, const SolverConfig& cfg);

// Value of the augmented Lagrangian at the given state.
double augmented_lagrangian(const SolverState& st, const RpcaProblem& p);

// The four constraint residual norms, each relative to 1 + ||M||_F, in the
// order (A_hat - A W^{-1}, B_hat - B, A B' - X, X + S - M).
std::array<double, 4> relative_residuals(const SolverState& st, const RpcaProblem& p);

SolveReport solve(const RpcaProblem& p, const SolverConfig& cfg);
// Runs the iteration from a caller-supplied state (warm starts); `st` is left
// at the terminal iterates.
SolveReport solve_with_state(const RpcaProblem& p, const SolverConfig& cfg, SolverState& st);

// KKT diagnostics at a state: absolute feasibility norms, distances of -Y1 /
// -Y2 to the spectral subdifferentials of lambda*h1 / lambda*h2, mass of Y4
// off the mask, and the worst entrywise l1 stationarity violation of S on it.
struct KktReport {
    double feas_factor_a = 0.0;
    double feas_factor_b = 0.0;
    double feas_bilinear = 0.0;
    double feas_data = 0.0;
    double stationarity_a_hat = 0.0;
    double stationarity_b_hat = 0.0;
    double y4_complement = 0.0;
    double s_stationarity = 0.0;
};

KktReport kkt_residuals(const SolverState& st, const RpcaProblem& p);

// Distance from `target` to lambda * (subdifferential of h at z), where h is
// the FactorA/FactorB penalty of the pairing. Spectral characterization: the
// gradient direction on nonzero singular values plus a spectral-norm ball on
// the zero block.
double subdiff_distance(const DenseMatrix& target, const DenseMatrix& z, const Regularizer& reg,
                        ProxSide side, double lambda);

// History file: '#'-prefixed header, then one space-separated line per
// iteration (iter, rho, the four residuals, Lagrangian, ||Y1||_2).
void write_history(const SolveReport& report, const std::filesystem::path& path);

}  // namespace wfrpca
