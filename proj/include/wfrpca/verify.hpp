#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "wfrpca/norms.hpp"
#include "wfrpca/rng.hpp"

namespace wfrpca {

// Result of a randomized inequality check. `worst_slack` is the most negative
// lhs - rhs seen (equality cases give 0, strict inequality positive values);
// `equality_attained` counts trials whose witness slack landed within 1e-11.
struct CheckReport {
    std::string name;
    int trials = 0;
    int violations = 0;
    double worst_slack = 0.0;
    int equality_attained = 0;
    std::vector<std::uint64_t> seeds_of_violations;

    std::string summary_line() const;
};

// Inequality family for the Stiefel sampling check: a Schatten exponent from
// {2, 1, 2/3, 1/2} or the log variant with k in {1, 2}.
struct SchattenCase {
    double q;
};
struct LogCase {
    int k;
    double eps = 0.01;
};
using StiefelCase = std::variant<SchattenCase, LogCase>;

// Parses "2" | "1" | "2/3" | "1/2" (also accepts the decimal forms of those
// exact values). Anything else is rejected.
double parse_schatten_q(const std::string& text);

// Samples P on St(n, r), sorted positive W (size n) and Sigma (size r) with
// log-uniform values on [1e-2, 1e2], and checks
//   ||W^{-1} P Sigma||_{Sq}^q >= sum_i (Sigma_ii / W_ii)^q
// (resp. the log form). Violation threshold: slack < -1e-10 * (1 + |rhs|).
CheckReport check_stiefel_inequality(int n, int r, const StiefelCase& which, int trials,
                                     RngSeed seed);

// Samples X of rank <= r and sorted W, then checks the factorization identity
// two ways: the witness attains the target within 1e-9 relative, and no
// random reparameterization A = U S^{1/2} C, B = V S^{1/2} C^{-T} over 20
// invertible C beats the target by more than 1e-9 relative.
CheckReport check_factorization(int m, int n, int r, const Regularizer& reg, int trials,
                                RngSeed seed);

// Random 1-D draws for every proximal operator against a grid search with
// step 1e-4 on [0, |y| + 1]; violation when the returned point's objective
// exceeds the grid minimum by more than 1e-6.
CheckReport check_prox_oracles(int trials, RngSeed seed);

}  // namespace wfrpca
