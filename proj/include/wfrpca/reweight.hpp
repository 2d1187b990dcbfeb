#pragma once

#include <vector>

#include "wfrpca/admm.hpp"

namespace wfrpca {

enum class EpsFloorMode {
    // floor = eps_floor * sigma_1 of the round-0 recovery; tracks data scale.
    RelativeToFirstRecovery,
    Absolute,
};

struct ReweightConfig {
    int outer_rounds = 1;
    double eps_floor = 1e-3;
    EpsFloorMode eps_floor_mode = EpsFloorMode::RelativeToFirstRecovery;
    SolverConfig inner;

    void validate() const;
};

struct ReweightResult {
    SolveReport report;                // final round
    std::vector<WeightSpec> weights;   // W^0 .. W^{outer_rounds}, last one unused
};

// Outer loop: solve with W^k, then set W^{k+1} to the floored top-r singular
// values of the recovered X. Round 0 requires identity weights, so a single
// round reproduces the plain solve exactly. Each later round warm-starts from
// the previous primal iterates (A, B, S, X) with duals cleared and rho reset,
// since the old duals belong to the old constraint geometry.
ReweightResult reweighted_solve(const RpcaProblem& p, const ReweightConfig& cfg);

// Top-r singular values of X_true floored at eps_floor; the idealized weights
// a ground-truth-aware caller would use.
WeightSpec oracle_weights(const DenseMatrix& x_true, int r, double eps_floor);

}  // namespace wfrpca
