#include "wfrpca/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "wfrpca/io.hpp"
#include "wfrpca/linalg.hpp"
#include "wfrpca/prox.hpp"

namespace wfrpca {

namespace {

constexpr double kValueLo = 1e-2;
constexpr double kValueHi = 1e2;

struct TrialOutcome {
    double slack = 0.0;
    bool violation = false;
    bool attained = false;
    std::uint64_t seed = 0;
};

CheckReport aggregate(std::string name, const std::vector<TrialOutcome>& outcomes) {
    CheckReport report;
    report.name = std::move(name);
    report.trials = static_cast<int>(outcomes.size());
    report.worst_slack = outcomes.empty() ? 0.0 : outcomes.front().slack;
    for (const TrialOutcome& t : outcomes) {
        report.worst_slack = std::min(report.worst_slack, t.slack);
        if (t.violation) {
            ++report.violations;
            report.seeds_of_violations.push_back(t.seed);
        }
        if (t.attained) ++report.equality_attained;
    }
    return report;
}

// Log-uniform draws on [1e-2, 1e2], sorted descending; stresses conditioning
// far more than uniform sampling would.
std::vector<double> sorted_log_uniform(int count, Rng& rng) {
    std::vector<double> v(count);
    for (double& x : v) x = rng.log_uniform(kValueLo, kValueHi);
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

DenseMatrix scale_rows(const DenseMatrix& a, std::span<const double> d) {
    DenseMatrix r(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) * d[i];
    return r;
}

double grid_minimum(const std::function<double(double)>& f, double lo, double hi, double step) {
    const long n = static_cast<long>(std::floor((hi - lo) / step));
    double best = f(lo);
    for (long i = 1; i <= n; ++i) best = std::min(best, f(lo + static_cast<double>(i) * step));
    return std::min(best, f(hi));
}

}  // namespace

std::string CheckReport::summary_line() const {
    std::string line = name + " trials=" + std::to_string(trials) +
                       " violations=" + std::to_string(violations) +
                       " worst_slack=" + format_full(worst_slack);
    if (!seeds_of_violations.empty()) {
        line += " violating_seeds=";
        for (std::size_t i = 0; i < seeds_of_violations.size(); ++i) {
            if (i) line += ",";
            line += std::to_string(seeds_of_violations[i]);
        }
    }
    return line;
}

double parse_schatten_q(const std::string& text) {
    if (text == "2") return 2.0;
    if (text == "1") return 1.0;
    if (text == "2/3") return 2.0 / 3.0;
    if (text == "1/2" || text == "0.5") return 0.5;
    // Accept decimal spellings that are exactly one of the allowed values.
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size() && (v == 2.0 || v == 1.0 || v == 0.5 || v == 2.0 / 3.0)) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("q must be one of 2, 1, 2/3, 1/2 (got '" + text + "')");
}

CheckReport check_stiefel_inequality(int n, int r, const StiefelCase& which, int trials,
                                     RngSeed seed) {
    if (n < r || r < 1) throw std::invalid_argument("check_stiefel_inequality: need n >= r >= 1");
    if (trials < 1) throw std::invalid_argument("check_stiefel_inequality: trials must be >= 1");

    std::string name;
    if (const auto* sc = std::get_if<SchattenCase>(&which)) {
        const double q = sc->q;
        if (q == 2.0) name = "stiefel[q=2]";
        else if (q == 1.0) name = "stiefel[q=1]";
        else if (q == 2.0 / 3.0) name = "stiefel[q=2/3]";
        else if (q == 0.5) name = "stiefel[q=1/2]";
        else throw std::invalid_argument("check_stiefel_inequality: q must be one of 2, 1, 2/3, 1/2");
    } else {
        const auto& lc = std::get<LogCase>(which);
        if (lc.k != 1 && lc.k != 2)
            throw std::invalid_argument("check_stiefel_inequality: log case needs k in {1, 2}");
        if (!(lc.eps > 0.0))
            throw std::invalid_argument("check_stiefel_inequality: eps must be positive");
        name = "stiefel[log,k=" + std::to_string(lc.k) + "]";
    }

    std::vector<TrialOutcome> outcomes(trials);
#pragma omp parallel for schedule(static)
    for (int t = 0; t < trials; ++t) {
        const RngSeed ts = derive_seed(seed, static_cast<std::uint64_t>(t));
        Rng rng(derive_seed(ts, 0));
        const DenseMatrix p = random_stiefel(n, r, derive_seed(ts, 1));
        const std::vector<double> w = sorted_log_uniform(n, rng);
        const std::vector<double> sigma = sorted_log_uniform(r, rng);

        std::vector<double> winv(n);
        for (int i = 0; i < n; ++i) winv[i] = 1.0 / w[i];
        const DenseMatrix mat = scale_columns(scale_rows(p, winv), sigma);
        const std::vector<double> mat_sigma = singular_values(mat);

        double lhs = 0.0, rhs = 0.0;
        if (const auto* sc = std::get_if<SchattenCase>(&which)) {
            for (double s : mat_sigma) lhs += std::pow(s, sc->q);
            for (int i = 0; i < r; ++i) rhs += std::pow(sigma[i] / w[i], sc->q);
        } else {
            const auto& lc = std::get<LogCase>(which);
            for (double s : mat_sigma) lhs += std::log(std::pow(s, 1.0 / lc.k) + lc.eps);
            for (int i = 0; i < r; ++i)
                rhs += std::log(std::pow(sigma[i] / w[i], 1.0 / lc.k) + lc.eps);
        }

        TrialOutcome& out = outcomes[t];
        out.seed = ts.value;
        out.slack = lhs - rhs;
        out.violation = out.slack < -1e-10 * (1.0 + std::fabs(rhs));
        out.attained = std::fabs(out.slack) <= 1e-11 * (1.0 + std::fabs(rhs));
    }
    return aggregate(std::move(name), outcomes);
}

CheckReport check_factorization(int m, int n, int r, const Regularizer& reg, int trials,
                                RngSeed seed) {
    if (r < 1 || r > std::min(m, n))
        throw std::invalid_argument("check_factorization: need 1 <= r <= min(m, n)");
    if (trials < 1) throw std::invalid_argument("check_factorization: trials must be >= 1");

    constexpr int kReparams = 20;
    std::vector<TrialOutcome> outcomes(trials);
#pragma omp parallel for schedule(static)
    for (int t = 0; t < trials; ++t) {
        const RngSeed ts = derive_seed(seed, static_cast<std::uint64_t>(t));
        Rng rng(derive_seed(ts, 0));
        const int rank = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(r)));
        const DenseMatrix u = random_stiefel(m, rank, derive_seed(ts, 1));
        const DenseMatrix v = random_stiefel(n, rank, derive_seed(ts, 2));
        const std::vector<double> sigma = sorted_log_uniform(rank, rng);
        const WeightSpec w(sorted_log_uniform(r, rng));
        const DenseMatrix x = multiply_nt(scale_columns(u, sigma), v);

        const double target = factorization_target(x, w, reg, r);
        const double rel = 1e-9 * (1.0 + std::fabs(target));

        const FactorWitness witness = build_witness(x, w, reg, r);
        const double witness_obj = surrogate_objective(witness.A_tilde, witness.B_tilde, w, reg);
        const double witness_gap = std::fabs(witness_obj - target);

        TrialOutcome& out = outcomes[t];
        out.seed = ts.value;
        out.slack = -witness_gap;
        out.violation = witness_gap > rel;
        out.attained = witness_gap <= 1e-11 * (1.0 + std::fabs(target));

        // Base factors [U S^{1/2}, 0]; every reparameterization A = base_A C,
        // B = base_B C^{-T} factors X, so its objective must stay above the
        // target. C = Q1 diag(d) Q2' with d in [1e-1, 1e1] keeps the inverse
        // well conditioned.
        std::vector<double> root(rank);
        for (int i = 0; i < rank; ++i) root[i] = std::sqrt(sigma[i]);
        DenseMatrix base_a(m, r), base_b(n, r);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < rank; ++j) base_a(i, j) = u(i, j) * root[j];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < rank; ++j) base_b(i, j) = v(i, j) * root[j];

        for (int rep = 0; rep < kReparams; ++rep) {
            const DenseMatrix q1 = random_stiefel(r, r, derive_seed(ts, 3 + 2 * rep));
            const DenseMatrix q2 = random_stiefel(r, r, derive_seed(ts, 4 + 2 * rep));
            std::vector<double> d(r), dinv(r);
            for (int i = 0; i < r; ++i) {
                d[i] = rng.log_uniform(1e-1, 1e1);
                dinv[i] = 1.0 / d[i];
            }
            const DenseMatrix c = multiply_nt(scale_columns(q1, d), q2);
            const DenseMatrix c_inv_t = multiply_nt(scale_columns(q1, dinv), q2);
            const double obj = surrogate_objective(multiply(base_a, c), multiply(base_b, c_inv_t),
                                                   w, reg);
            const double slack = obj - target;
            out.slack = std::min(out.slack, slack);
            if (slack < -rel) out.violation = true;
        }
    }
    return aggregate("factorization[" + to_string(reg.kind) + "]", outcomes);
}

CheckReport check_prox_oracles(int trials, RngSeed seed) {
    if (trials < 1) throw std::invalid_argument("check_prox_oracles: trials must be >= 1");

    enum Op { SoftThreshold, FroHalf, FroThird, SvtScalar, LsvtScalar, kOpCount };
    constexpr double kGridStep = 1e-4;
    constexpr double kTol = 1e-6;

    const int total = trials * kOpCount;
    std::vector<TrialOutcome> outcomes(total);
#pragma omp parallel for schedule(static)
    for (int idx = 0; idx < total; ++idx) {
        const int op = idx % kOpCount;
        const RngSeed ts = derive_seed(seed, static_cast<std::uint64_t>(idx));
        Rng rng(ts);
        const double y = rng.uniform(0.0, 5.0);
        const double step = rng.log_uniform(1e-2, 2.0);
        const double eps = rng.log_uniform(1e-2, 1.0);

        // Every operator reduces to a 1-D objective 1/2 (x - y)^2 + step*g(x)
        // on x >= 0; signs are handled by odd symmetry.
        std::function<double(double)> objective;
        double returned = 0.0;
        switch (op) {
            case SoftThreshold:
                objective = [&](double x) { return 0.5 * (x - y) * (x - y) + step * x; };
                returned = soft_threshold(y, step);
                break;
            case FroHalf:
                objective = [&](double x) { return 0.5 * (x - y) * (x - y) + step * 0.5 * x * x; };
                returned = y / (1.0 + 2.0 * 0.5 * step);
                break;
            case FroThird:
                objective = [&](double x) {
                    return 0.5 * (x - y) * (x - y) + step * (1.0 / 3.0) * x * x;
                };
                returned = y / (1.0 + 2.0 * step / 3.0);
                break;
            case SvtScalar:
                objective = [&](double x) { return 0.5 * (x - y) * (x - y) + step * x; };
                returned = std::max(y - step, 0.0);
                break;
            case LsvtScalar:
            default:
                objective = [&](double x) {
                    return 0.5 * (x - y) * (x - y) + step * std::log(x + eps);
                };
                returned = lsvt_scalar(y, step, eps);
                break;
        }

        const double best = grid_minimum(objective, 0.0, y + 1.0, kGridStep);
        TrialOutcome& out = outcomes[idx];
        out.seed = ts.value;
        out.slack = best - objective(returned);
        out.violation = out.slack < -kTol;
    }
    return aggregate("prox", outcomes);
}

}  // namespace wfrpca
