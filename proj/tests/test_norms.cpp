#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "wfrpca/linalg.hpp"
#include "wfrpca/norms.hpp"
#include "wfrpca/rng.hpp"

using namespace wfrpca;

namespace {

// Random X of the given rank built from Stiefel factors and log-uniform
// singular values, plus a random sorted weight vector.
struct RandomInstance {
    DenseMatrix x;
    WeightSpec w;
    SvdTriple x_svd;
};

RandomInstance random_instance(int m, int n, int rank, int r, RngSeed seed) {
    Rng rng(derive_seed(seed, 0));
    const DenseMatrix u = random_stiefel(m, rank, derive_seed(seed, 1));
    const DenseMatrix v = random_stiefel(n, rank, derive_seed(seed, 2));
    std::vector<double> sigma(rank), w(r);
    for (double& s : sigma) s = rng.log_uniform(1e-2, 1e2);
    for (double& x : w) x = rng.log_uniform(1e-2, 1e2);
    std::sort(sigma.begin(), sigma.end(), std::greater<>());
    std::sort(w.begin(), w.end(), std::greater<>());
    RandomInstance inst{multiply_nt(scale_columns(u, sigma), v), WeightSpec(w), {}};
    inst.x_svd = svd(inst.x);
    return inst;
}

const std::vector<Regularizer> kAllKinds = {
    Regularizer::nuclear(), Regularizer::schatten_half(), Regularizer::schatten_two_thirds(),
    Regularizer::log(0.05)};

}  // namespace

TEST_CASE("weighted schatten power on diagonal matrices") {
    const WeightSpec ones = WeightSpec::identity(2);
    CHECK(weighted_schatten_power(DenseMatrix(2, 2, {4, 0, 0, 1}), ones, 0.5) ==
          doctest::Approx(3.0).epsilon(1e-14));
    for (double q : {2.0, 1.0, 2.0 / 3.0, 0.5})
        CHECK(weighted_schatten_power(DenseMatrix(3, 2), WeightSpec::identity(2), q) == 0.0);
    const WeightSpec w21(std::vector<double>{2.0, 1.0});
    CHECK(weighted_schatten_power(DenseMatrix(2, 2, {8, 0, 0, 1}), w21, 2.0 / 3.0) ==
          doctest::Approx(std::pow(4.0, 2.0 / 3.0) + 1.0).epsilon(1e-14));
}

TEST_CASE("weighted schatten power rejects unsupported exponents and short weights") {
    const DenseMatrix x(2, 2, {4, 0, 0, 1});
    CHECK_THROWS_AS(weighted_schatten_power(x, WeightSpec::identity(2), 0.4),
                    std::invalid_argument);
    CHECK_THROWS_AS(weighted_schatten_power(x, WeightSpec::identity(1), 1.0),
                    std::invalid_argument);
    // A single weight is enough when only one singular value is nonzero.
    CHECK(weighted_schatten_power(DenseMatrix(2, 2, {4, 0, 0, 0}), WeightSpec::identity(1), 1.0) ==
          doctest::Approx(4.0));
}

TEST_CASE("weighted schatten power matches the Gram eigenvalue oracle") {
    const RandomInstance inst = random_instance(6, 5, 5, 5, RngSeed{100});
    const std::vector<double> oracle_sigma = oracles::singular_values_via_gram(inst.x);
    for (double q : {2.0, 1.0, 2.0 / 3.0, 0.5}) {
        double expected = 0.0;
        for (std::size_t i = 0; i < oracle_sigma.size(); ++i)
            expected += std::pow(oracle_sigma[i] / inst.w[static_cast<int>(i)], q);
        CHECK(weighted_schatten_power(inst.x, inst.w, q) ==
              doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("weighted log norm values and preconditions") {
    CHECK(weighted_log_norm(DenseMatrix(2, 2), WeightSpec::identity(2), 1, 1.0) ==
          doctest::Approx(0.0));
    CHECK_THROWS_AS(weighted_log_norm(DenseMatrix(2, 2, {4, 0, 0, 1}), WeightSpec::identity(2), 2,
                                      0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(weighted_log_norm(DenseMatrix(2, 2), WeightSpec::identity(2), 3, 0.5),
                    std::invalid_argument);
    const WeightSpec w21(std::vector<double>{2.0, 1.0});
    CHECK(weighted_log_norm(DenseMatrix(2, 2, {4, 0, 0, 1}), w21, 2, 0.5) ==
          doctest::Approx(std::log(std::sqrt(2.0) + 0.5) + std::log(1.5)).epsilon(1e-14));
}

TEST_CASE("surrogate objective on zero and diagonal factors") {
    const WeightSpec w1 = WeightSpec::identity(1);
    CHECK(surrogate_objective(DenseMatrix(3, 2), DenseMatrix(4, 2), WeightSpec::identity(2),
                              Regularizer::nuclear()) == 0.0);
    CHECK(surrogate_objective(DenseMatrix(3, 2), DenseMatrix(4, 2), WeightSpec::identity(2),
                              Regularizer::schatten_half()) == 0.0);
    // Zero factors of width r under the log kind: r * log(eps).
    const double eps = 0.25;
    CHECK(surrogate_objective(DenseMatrix(3, 2), DenseMatrix(4, 2), WeightSpec::identity(2),
                              Regularizer::log(eps)) ==
          doctest::Approx(2.0 * std::log(eps)).epsilon(1e-14));

    CHECK(surrogate_objective(DenseMatrix(1, 1, {2}), DenseMatrix(1, 1, {3}), w1,
                              Regularizer::nuclear()) == doctest::Approx(6.5));
    CHECK(surrogate_objective(DenseMatrix(1, 1, {3}), DenseMatrix(1, 1, {2}), w1,
                              Regularizer::schatten_two_thirds()) ==
          doctest::Approx(13.0 / 3.0).epsilon(1e-14));

    CHECK_THROWS_AS(surrogate_objective(DenseMatrix(3, 2), DenseMatrix(4, 1),
                                        WeightSpec::identity(2), Regularizer::nuclear()),
                    std::invalid_argument);
}

TEST_CASE("witness reproduces X and attains the target on hand examples") {
    const DenseMatrix x(2, 2, {4, 0, 0, 1});

    const WeightSpec ones = WeightSpec::identity(2);
    const FactorWitness nuclear = build_witness(x, ones, Regularizer::nuclear(), 2);
    CHECK(frobenius_norm(sub(multiply_nt(nuclear.A_tilde, nuclear.B_tilde), x)) <= 1e-12);
    CHECK(surrogate_objective(nuclear.A_tilde, nuclear.B_tilde, ones, Regularizer::nuclear()) ==
          doctest::Approx(5.0).epsilon(1e-14));

    const WeightSpec w21(std::vector<double>{2.0, 1.0});
    const FactorWitness half = build_witness(x, w21, Regularizer::schatten_half(), 2);
    const double expected = weighted_schatten_power(x, w21, 0.5);
    CHECK(expected == doctest::Approx(std::sqrt(2.0) + 1.0).epsilon(1e-14));
    CHECK(surrogate_objective(half.A_tilde, half.B_tilde, w21, Regularizer::schatten_half()) ==
          doctest::Approx(expected).epsilon(1e-12));

    for (const Regularizer& reg :
         {Regularizer::nuclear(), Regularizer::schatten_half(), Regularizer::schatten_two_thirds()}) {
        const FactorWitness zero = build_witness(DenseMatrix(3, 2), ones, reg, 2);
        CHECK(surrogate_objective(zero.A_tilde, zero.B_tilde, ones, reg) == 0.0);
    }

    CHECK_THROWS_AS(build_witness(x, ones, Regularizer::nuclear(), 1), std::invalid_argument);
}

TEST_CASE("witness equality holds for every kind on random instances") {
    for (const Regularizer& reg : kAllKinds) {
        for (int trial = 0; trial < 25; ++trial) {
            const RandomInstance inst =
                random_instance(8, 7, 1 + trial % 4, 4, RngSeed{500 + 10 * trial});
            const double target = factorization_target(inst.x, inst.w, reg, 4);
            const FactorWitness witness = build_witness(inst.x, inst.w, reg, 4);
            const double obj = surrogate_objective(witness.A_tilde, witness.B_tilde, inst.w, reg);
            CHECK(std::fabs(obj - target) <= 1e-9 * (1.0 + std::fabs(target)));

            const double recon =
                frobenius_norm(sub(multiply_nt(witness.A_tilde, witness.B_tilde), inst.x));
            CHECK(recon <= 1e-9 * (1.0 + frobenius_norm(inst.x)));
        }
    }
}

TEST_CASE("no reparameterized factorization beats the target") {
    for (const Regularizer& reg : kAllKinds) {
        for (int trial = 0; trial < 10; ++trial) {
            const int r = 4;
            const RandomInstance inst =
                random_instance(8, 7, 1 + trial % 4, r, RngSeed{900 + 10 * trial});
            const double target = factorization_target(inst.x, inst.w, reg, r);

            Rng rng(RngSeed{1234 + static_cast<std::uint64_t>(trial)});
            const int rank = numerical_rank(inst.x_svd.singular_values, kRankRelTol);
            DenseMatrix base_a(8, r), base_b(7, r);
            for (int i = 0; i < 8; ++i)
                for (int j = 0; j < rank; ++j)
                    base_a(i, j) = inst.x_svd.U(i, j) * std::sqrt(inst.x_svd.singular_values[j]);
            for (int i = 0; i < 7; ++i)
                for (int j = 0; j < rank; ++j)
                    base_b(i, j) = inst.x_svd.V(i, j) * std::sqrt(inst.x_svd.singular_values[j]);

            for (int rep = 0; rep < 20; ++rep) {
                const DenseMatrix q1 =
                    random_stiefel(r, r, RngSeed{5000 + 100 * static_cast<std::uint64_t>(trial) +
                                                 static_cast<std::uint64_t>(rep)});
                const DenseMatrix q2 =
                    random_stiefel(r, r, RngSeed{7000 + 100 * static_cast<std::uint64_t>(trial) +
                                                 static_cast<std::uint64_t>(rep)});
                std::vector<double> d(r), dinv(r);
                for (int i = 0; i < r; ++i) {
                    d[i] = rng.log_uniform(0.2, 5.0);
                    dinv[i] = 1.0 / d[i];
                }
                const DenseMatrix c = multiply_nt(scale_columns(q1, d), q2);
                const DenseMatrix c_inv_t = multiply_nt(scale_columns(q1, dinv), q2);
                const double obj = surrogate_objective(multiply(base_a, c),
                                                       multiply(base_b, c_inv_t), inst.w, reg);
                CHECK(obj >= target - 1e-9 * (1.0 + std::fabs(target)));
            }
        }
    }
}

TEST_CASE("weighted norms are unitarily invariant") {
    const RandomInstance inst = random_instance(6, 5, 4, 5, RngSeed{321});
    const DenseMatrix q = random_stiefel(6, 6, RngSeed{11});
    const DenseMatrix p = random_stiefel(5, 5, RngSeed{12});
    const DenseMatrix rotated = multiply_nt(multiply(q, inst.x), p);
    for (double qexp : {2.0, 1.0, 2.0 / 3.0, 0.5}) {
        const double a = weighted_schatten_power(inst.x, inst.w, qexp);
        const double b = weighted_schatten_power(rotated, inst.w, qexp);
        CHECK(std::fabs(a - b) <= 1e-10 * (1.0 + std::fabs(a)));
    }
    const double la = weighted_log_norm(inst.x, inst.w, 2, 0.1);
    const double lb = weighted_log_norm(rotated, inst.w, 2, 0.1);
    CHECK(std::fabs(la - lb) <= 1e-10 * (1.0 + std::fabs(la)));
}

TEST_CASE("increasing a weight never increases the weighted power") {
    const RandomInstance inst = random_instance(6, 5, 4, 5, RngSeed{4321});
    for (double q : {2.0, 1.0, 2.0 / 3.0, 0.5}) {
        const double base = weighted_schatten_power(inst.x, inst.w, q);
        for (int bump = 0; bump < inst.w.size(); ++bump) {
            std::vector<double> raised(inst.w.values().begin(), inst.w.values().end());
            raised[bump] *= 1.5;
            // Keep the vector sorted so it stays a valid WeightSpec.
            std::sort(raised.begin(), raised.end(), std::greater<>());
            CHECK(weighted_schatten_power(inst.x, WeightSpec(raised), q) <=
                  base + 1e-12 * (1.0 + base));
        }
    }
}

TEST_CASE("factorization target counts log zeros at the factor width") {
    // Rank-1 X embedded in 4x3 with factor width 2: the witness factors are
    // width 2, so exactly one zero singular value contributes log(eps).
    const Regularizer reg = Regularizer::log(0.1);
    const DenseMatrix u = random_stiefel(4, 1, RngSeed{61});
    const DenseMatrix v = random_stiefel(3, 1, RngSeed{62});
    const std::vector<double> sigma{2.5};
    const DenseMatrix x = multiply_nt(scale_columns(u, sigma), v);
    const WeightSpec w(std::vector<double>{1.5, 1.0});

    const double target = factorization_target(x, w, reg, 2);
    CHECK(target ==
          doctest::Approx(std::log(std::sqrt(2.5 / 1.5) + 0.1) + std::log(0.1)).epsilon(1e-12));

    const FactorWitness witness = build_witness(x, w, reg, 2);
    const double obj = surrogate_objective(witness.A_tilde, witness.B_tilde, w, reg);
    CHECK(obj == doctest::Approx(target).epsilon(1e-12));
}

TEST_CASE("regularizer parsing") {
    CHECK(parse_reg_kind("nuclear") == RegKind::WeightedNuclear);
    CHECK(parse_reg_kind("schatten_half") == RegKind::WeightedSchattenHalf);
    CHECK(parse_reg_kind("schatten_two_thirds") == RegKind::WeightedSchattenTwoThirds);
    CHECK(parse_reg_kind("log") == RegKind::WeightedLog);
    CHECK_THROWS_AS(parse_reg_kind("frobenius"), std::invalid_argument);
    CHECK_THROWS_AS(Regularizer::log(0.0), std::invalid_argument);
}
