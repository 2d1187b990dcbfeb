// Shared builders for solver tests: random problems, random states, and a
// deterministic subsampled mask.
#pragma once

#include "wfrpca/admm.hpp"
#include "wfrpca/datagen.hpp"
#include "wfrpca/rng.hpp"

namespace test_support {

inline wfrpca::ObservationMask random_mask(int m, int n, double fraction, wfrpca::RngSeed seed) {
    wfrpca::Rng rng(seed);
    std::vector<std::pair<int, int>> cells;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            if (rng.uniform01() < fraction) cells.emplace_back(i, j);
    if (cells.empty()) cells.emplace_back(0, 0);
    return {m, n, std::move(cells)};
}

inline wfrpca::RpcaProblem random_problem(int m, int n, int r, const wfrpca::Regularizer& reg,
                                          wfrpca::RngSeed seed, double mask_fraction = 0.85) {
    wfrpca::Rng rng(wfrpca::derive_seed(seed, 0));
    wfrpca::RpcaProblem p{wfrpca::gaussian_matrix(m, n, rng),
                          random_mask(m, n, mask_fraction, wfrpca::derive_seed(seed, 1)),
                          0.2,
                          r,
                          wfrpca::WeightSpec::identity(r),
                          reg};
    std::vector<double> w(r);
    for (double& v : w) v = rng.log_uniform(0.5, 3.0);
    std::sort(w.begin(), w.end(), std::greater<>());
    p.W = wfrpca::WeightSpec(w);
    return p;
}

inline wfrpca::SolverState random_state(const wfrpca::RpcaProblem& p, wfrpca::RngSeed seed) {
    wfrpca::Rng rng(seed);
    const int m = p.M.rows(), n = p.M.cols(), r = p.r;
    wfrpca::SolverState st;
    st.A = wfrpca::gaussian_matrix(m, r, rng);
    st.B = wfrpca::gaussian_matrix(n, r, rng);
    st.S = wfrpca::scale(wfrpca::gaussian_matrix(m, n, rng), 0.3);
    st.X = wfrpca::gaussian_matrix(m, n, rng);
    st.A_hat = wfrpca::gaussian_matrix(m, r, rng);
    st.B_hat = wfrpca::gaussian_matrix(n, r, rng);
    st.Y1 = wfrpca::gaussian_matrix(m, r, rng);
    st.Y2 = wfrpca::gaussian_matrix(n, r, rng);
    st.Y3 = wfrpca::gaussian_matrix(m, n, rng);
    st.Y4 = wfrpca::gaussian_matrix(m, n, rng);
    st.rho = rng.log_uniform(0.5, 5.0);
    st.iter = 0;
    return st;
}

}  // namespace test_support
