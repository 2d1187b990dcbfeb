#include "wfrpca/reweight.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "wfrpca/linalg.hpp"

namespace wfrpca {

void ReweightConfig::validate() const {
    if (outer_rounds < 1) throw std::invalid_argument("ReweightConfig: outer_rounds must be >= 1");
    if (!(eps_floor > 0.0)) throw std::invalid_argument("ReweightConfig: eps_floor must be positive");
    inner.validate();
}

namespace {

WeightSpec floored_top_singular_values(const std::vector<double>& sigma, int r, double floor) {
    std::vector<double> w(r, floor);
    for (int i = 0; i < r && i < static_cast<int>(sigma.size()); ++i)
        w[i] = std::max(sigma[i], floor);
    return WeightSpec(std::move(w));
}

}  // namespace

ReweightResult reweighted_solve(const RpcaProblem& p, const ReweightConfig& cfg) {
    p.validate();
    cfg.validate();
    for (int i = 0; i < p.W.size(); ++i)
        if (p.W[i] != 1.0)
            throw std::invalid_argument("reweighted_solve: round 0 requires identity weights");

    ReweightResult result;
    result.weights.push_back(p.W);

    RpcaProblem round_problem = p;
    SolverState state = init_state(round_problem, cfg.inner);
    double floor = cfg.eps_floor;  // resolved after round 0 in relative mode

    for (int round = 0; round < cfg.outer_rounds; ++round) {
        try {
            result.report = solve_with_state(round_problem, cfg.inner, state);
        } catch (const std::exception& e) {
            throw std::runtime_error("reweighted_solve: round " + std::to_string(round) + ": " +
                                     e.what());
        }
        if (result.report.termination == Termination::NumericalFailure)
            throw NumericalError("reweighted_solve: round " + std::to_string(round) +
                                 ": numerical failure in inner solver");

        const std::vector<double> sigma = singular_values(result.report.X_hat);
        if (round == 0 && cfg.eps_floor_mode == EpsFloorMode::RelativeToFirstRecovery)
            floor = cfg.eps_floor * (sigma.empty() ? 1.0 : std::max(sigma.front(), 1.0e-300));
        result.weights.push_back(floored_top_singular_values(sigma, p.r, floor));

        if (round + 1 < cfg.outer_rounds) {
            // Warm start: keep the primal iterates, re-derive the relaxation
            // variables under the new weights, clear duals, reset rho.
            round_problem.W = result.weights.back();
            state.A_hat = scale_columns(state.A, round_problem.W.inverse());
            state.B_hat = state.B;
            state.Y1 = DenseMatrix(state.Y1.rows(), state.Y1.cols());
            state.Y2 = DenseMatrix(state.Y2.rows(), state.Y2.cols());
            state.Y3 = DenseMatrix(state.Y3.rows(), state.Y3.cols());
            state.Y4 = DenseMatrix(state.Y4.rows(), state.Y4.cols());
            state.rho = cfg.inner.rho0;
            state.iter = 0;
        }
    }
    return result;
}

WeightSpec oracle_weights(const DenseMatrix& x_true, int r, double eps_floor) {
    if (r < 1 || r > std::min(x_true.rows(), x_true.cols()))
        throw std::invalid_argument("oracle_weights: need 1 <= r <= min(m, n)");
    if (!(eps_floor > 0.0)) throw std::invalid_argument("oracle_weights: eps_floor must be positive");
    return floored_top_singular_values(singular_values(x_true), r, eps_floor);
}

}  // namespace wfrpca
