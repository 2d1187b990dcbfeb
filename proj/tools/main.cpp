// Command-line front end: synthetic instance generation, recovery runs with
// optional singular-value reweighting, the randomized theorem checkers, and
// recovery metrics. Every run writes a manifest sufficient to reproduce it.

#include <CLI11.hpp>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "wfrpca/admm.hpp"
#include "wfrpca/datagen.hpp"
#include "wfrpca/io.hpp"
#include "wfrpca/linalg.hpp"
#include "wfrpca/reweight.hpp"
#include "wfrpca/verify.hpp"

namespace fs = std::filesystem;
using namespace wfrpca;

namespace {

constexpr const char* kFormatVersion = "1";

constexpr int kExitOk = 0;
constexpr int kExitBadConfig = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitNumericalFailure = 3;

int cmd_gen(int m, int n, int rank, double corrupt, double mag, double observe,
            std::uint64_t seed, const std::string& out_dir) {
    SyntheticSpec spec;
    spec.m = m;
    spec.n = n;
    spec.true_rank = rank;
    spec.corruption_fraction = corrupt;
    spec.corruption_magnitude = mag;
    spec.observe_fraction = observe;
    spec.seed = RngSeed{seed};
    const GroundTruth truth = generate(spec);

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    write_matrix(truth.M, dir / "M.txt");
    write_mask(truth.mask, dir / "mask.txt");
    write_matrix(truth.X_true, dir / "X_true.txt");
    write_matrix(truth.S_true, dir / "S_true.txt");

    KeyValueList manifest{
        {"format_version", kFormatVersion},
        {"command", "gen"},
        {"m", std::to_string(m)},
        {"n", std::to_string(n)},
        {"rank", std::to_string(rank)},
        {"corrupt", format_full(corrupt)},
        {"mag", format_full(mag)},
        {"observe", format_full(observe)},
        {"seed", std::to_string(seed)},
        {"m_file", "M.txt"},
        {"mask_file", "mask.txt"},
        {"x_true_file", "X_true.txt"},
        {"s_true_file", "S_true.txt"},
    };
    write_flat_file(manifest, dir / "manifest.txt");
    return kExitOk;
}

// Typed access to the flat key = value config with unknown-key rejection and
// error messages that name the offending key.
class ConfigReader {
public:
    explicit ConfigReader(const KeyValueList& entries) {
        for (const auto& [key, value] : entries) {
            if (values_.contains(key)) throw std::runtime_error("duplicate key '" + key + "'");
            values_[key] = value;
        }
    }

    std::optional<std::string> get(const std::string& key) {
        used_.insert(key);
        const auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        return it->second;
    }

    std::string require(const std::string& key) {
        auto v = get(key);
        if (!v) throw std::runtime_error("missing required key '" + key + "'");
        return *v;
    }

    double number(const std::string& key, double fallback) {
        const auto v = get(key);
        if (!v) return fallback;
        try {
            std::size_t used = 0;
            const double x = std::stod(*v, &used);
            if (used != v->size()) throw std::invalid_argument("");
            return x;
        } catch (const std::exception&) {
            throw std::runtime_error("key '" + key + "': expected a number, got '" + *v + "'");
        }
    }

    long integer(const std::string& key, long fallback) {
        const auto v = get(key);
        if (!v) return fallback;
        try {
            std::size_t used = 0;
            const long x = std::stol(*v, &used);
            if (used != v->size()) throw std::invalid_argument("");
            return x;
        } catch (const std::exception&) {
            throw std::runtime_error("key '" + key + "': expected an integer, got '" + *v + "'");
        }
    }

    void reject_unknown() const {
        for (const auto& [key, _] : values_)
            if (!used_.contains(key)) throw std::runtime_error("unknown key '" + key + "'");
    }

private:
    std::map<std::string, std::string> values_;
    std::set<std::string> used_;
};

int cmd_solve(const std::string& config_path) {
    ConfigReader cfg{[&] {
        try {
            return parse_flat_file(config_path);
        } catch (const std::exception& e) {
            throw std::runtime_error(e.what());
        }
    }()};

    const fs::path base = fs::path(config_path).parent_path();
    const auto resolve = [&](const std::string& p) {
        const fs::path path(p);
        return path.is_absolute() ? path : base / path;
    };

    const DenseMatrix m = read_matrix(resolve(cfg.require("m_file")));
    ObservationMask mask = [&] {
        if (const auto mask_file = cfg.get("mask_file"))
            return read_mask(resolve(*mask_file));
        return ObservationMask::full(m.rows(), m.cols());
    }();

    RpcaProblem problem{m, mask, 0.0, 0, WeightSpec::identity(1), Regularizer::nuclear()};
    problem.r = static_cast<int>(cfg.integer("r", 0));
    if (problem.r < 1) throw std::runtime_error("key 'r': required positive integer");
    problem.W = WeightSpec::identity(problem.r);
    problem.lambda = cfg.number("lambda", default_lambda(m.rows(), m.cols()));

    const std::string reg_name = cfg.get("regularizer").value_or("nuclear");
    try {
        problem.reg.kind = parse_reg_kind(reg_name);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("key 'regularizer': ") + e.what());
    }
    problem.reg.eps_log = cfg.number("eps_log", 0.01);

    ReweightConfig rw;
    rw.outer_rounds = static_cast<int>(cfg.integer("outer_rounds", 1));
    rw.eps_floor = cfg.number("eps_floor", 1e-3);
    const std::string floor_mode = cfg.get("eps_floor_mode").value_or("relative");
    if (floor_mode == "relative")
        rw.eps_floor_mode = EpsFloorMode::RelativeToFirstRecovery;
    else if (floor_mode == "absolute")
        rw.eps_floor_mode = EpsFloorMode::Absolute;
    else
        throw std::runtime_error("key 'eps_floor_mode': expected relative | absolute");

    rw.inner.rho0 = cfg.number("rho0", rw.inner.rho0);
    rw.inner.mu = cfg.number("mu", rw.inner.mu);
    rw.inner.rho_max = cfg.number("rho_max", rw.inner.rho_max);
    rw.inner.max_iter = static_cast<int>(cfg.integer("max_iter", rw.inner.max_iter));
    rw.inner.tol_primal = cfg.number("tol_primal", rw.inner.tol_primal);
    rw.inner.seed = RngSeed{static_cast<std::uint64_t>(cfg.integer("seed", 0))};
    const std::string init = cfg.get("init").value_or("svd");
    if (init == "svd")
        rw.inner.init_kind = InitKind::SvdOfObserved;
    else if (init == "gaussian")
        rw.inner.init_kind = InitKind::SeededGaussian;
    else
        throw std::runtime_error("key 'init': expected svd | gaussian");

    const fs::path x_hat_file = resolve(cfg.get("x_hat_file").value_or("x_hat.txt"));
    const fs::path s_hat_file = resolve(cfg.get("s_hat_file").value_or("s_hat.txt"));
    const fs::path weights_file = resolve(cfg.get("weights_file").value_or("weights.txt"));
    const fs::path history_file = resolve(cfg.get("history_file").value_or("history.txt"));
    const fs::path manifest_file =
        resolve(cfg.get("manifest_file").value_or("solve_manifest.txt"));
    const auto x_true_file = cfg.get("x_true_file");
    const auto s_true_file = cfg.get("s_true_file");

    try {
        problem.validate();
        rw.validate();
    } catch (const std::exception& e) {
        throw std::runtime_error(e.what());
    }
    cfg.reject_unknown();

    ReweightResult result;
    try {
        result = reweighted_solve(problem, rw);
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumericalFailure;
    }
    const SolveReport& report = result.report;

    write_matrix(report.X_hat, x_hat_file);
    write_matrix(report.S_hat, s_hat_file);
    write_history(report, history_file);
    {
        std::ofstream out(weights_file);
        if (!out) throw std::runtime_error(weights_file.string() + ": cannot open for writing");
        out << result.weights.size() << ' ' << problem.r << '\n';
        for (const WeightSpec& w : result.weights) {
            for (int i = 0; i < w.size(); ++i) out << (i ? " " : "") << format_full(w[i]);
            out << '\n';
        }
    }

    KeyValueList manifest{
        {"format_version", kFormatVersion},
        {"command", "solve"},
        {"m_file", cfg.get("m_file").value_or("")},
        {"regularizer", to_string(problem.reg.kind)},
        {"eps_log", format_full(problem.reg.eps_log)},
        {"lambda", format_full(problem.lambda)},
        {"r", std::to_string(problem.r)},
        {"rho0", format_full(rw.inner.rho0)},
        {"mu", format_full(rw.inner.mu)},
        {"rho_max", format_full(rw.inner.rho_max)},
        {"max_iter", std::to_string(rw.inner.max_iter)},
        {"tol_primal", format_full(rw.inner.tol_primal)},
        {"init", init},
        {"seed", std::to_string(rw.inner.seed.value)},
        {"outer_rounds", std::to_string(rw.outer_rounds)},
        {"eps_floor", format_full(rw.eps_floor)},
        {"eps_floor_mode", floor_mode},
        {"termination", to_string(report.termination)},
        {"iterations", std::to_string(report.iterations)},
    };

    if (x_true_file && s_true_file) {
        const DenseMatrix x_true = read_matrix(resolve(*x_true_file));
        const DenseMatrix s_true = read_matrix(resolve(*s_true_file));
        GroundTruth truth{x_true, s_true, add(x_true, s_true), mask};
        const RecoveryMetrics metrics = recovery_metrics(truth, report.X_hat, report.S_hat);
        manifest.emplace_back("rel_error_x", format_full(metrics.rel_error_x));
        manifest.emplace_back("rel_error_s", format_full(metrics.rel_error_s));
        manifest.emplace_back("rank_x", std::to_string(metrics.rank_x));
        manifest.emplace_back("support_precision", format_full(metrics.support_precision));
        manifest.emplace_back("support_recall", format_full(metrics.support_recall));
    }
    write_flat_file(manifest, manifest_file);

    switch (report.termination) {
        case Termination::Converged: return kExitOk;
        case Termination::NumericalFailure: return kExitNumericalFailure;
        case Termination::MaxIter:
        case Termination::RhoCapped: return kExitNotConverged;
    }
    return kExitNotConverged;
}

CheckReport merge_reports(const std::string& name, const std::vector<CheckReport>& parts) {
    CheckReport merged;
    merged.name = name;
    merged.worst_slack = parts.front().worst_slack;
    for (const CheckReport& part : parts) {
        merged.trials += part.trials;
        merged.violations += part.violations;
        merged.equality_attained += part.equality_attained;
        merged.worst_slack = std::min(merged.worst_slack, part.worst_slack);
        merged.seeds_of_violations.insert(merged.seeds_of_violations.end(),
                                          part.seeds_of_violations.begin(),
                                          part.seeds_of_violations.end());
    }
    return merged;
}

int cmd_verify(bool all, bool stiefel, bool factorization, bool prox, int trials,
               std::uint64_t seed, int n, int r, int fact_m, const std::string& q_text,
               const std::string& kind_text, int log_k, double eps) {
    if (all) stiefel = factorization = prox = true;
    if (!stiefel && !factorization && !prox)
        throw CLI::ValidationError("verify", "select at least one of --all/--stiefel/--factorization/--prox");

    int violations = 0;
    const RngSeed base{seed};

    if (stiefel) {
        std::vector<CheckReport> parts;
        std::uint64_t stream = 0;
        if (q_text == "log") {
            parts.push_back(check_stiefel_inequality(n, r, LogCase{log_k, eps}, trials,
                                                     derive_seed(base, stream)));
        } else if (!q_text.empty()) {
            parts.push_back(check_stiefel_inequality(
                n, r, SchattenCase{parse_schatten_q(q_text)}, trials, derive_seed(base, stream)));
        } else {
            for (double q : {2.0, 1.0, 2.0 / 3.0, 0.5})
                parts.push_back(check_stiefel_inequality(n, r, SchattenCase{q}, trials,
                                                         derive_seed(base, stream++)));
            for (int k : {1, 2})
                parts.push_back(check_stiefel_inequality(n, r, LogCase{k, eps}, trials,
                                                         derive_seed(base, stream++)));
        }
        const CheckReport merged = merge_reports("stiefel", parts);
        std::cout << merged.summary_line() << "\n";
        violations += merged.violations;
    }
    if (factorization) {
        std::vector<CheckReport> parts;
        std::uint64_t stream = 100;
        std::vector<Regularizer> kinds;
        if (!kind_text.empty()) {
            Regularizer reg;
            reg.kind = parse_reg_kind(kind_text);
            reg.eps_log = eps;
            kinds.push_back(reg);
        } else {
            kinds = {Regularizer::nuclear(), Regularizer::schatten_half(),
                     Regularizer::schatten_two_thirds(), Regularizer::log(eps)};
        }
        for (const Regularizer& reg : kinds)
            parts.push_back(
                check_factorization(fact_m, n, r, reg, trials, derive_seed(base, stream++)));
        const CheckReport merged = merge_reports("factorization", parts);
        std::cout << merged.summary_line() << "\n";
        violations += merged.violations;
    }
    if (prox) {
        const CheckReport report = check_prox_oracles(trials, derive_seed(base, 200));
        std::cout << report.summary_line() << "\n";
        violations += report.violations;
    }
    return violations == 0 ? kExitOk : kExitNotConverged;
}

int cmd_metrics(const std::string& x_true_path, const std::string& s_true_path,
                const std::string& x_hat_path, const std::string& s_hat_path) {
    const DenseMatrix x_true = read_matrix(x_true_path);
    const DenseMatrix s_true = read_matrix(s_true_path);
    GroundTruth truth{x_true, s_true, add(x_true, s_true),
                      ObservationMask::full(x_true.rows(), x_true.cols())};
    const RecoveryMetrics metrics =
        recovery_metrics(truth, read_matrix(x_hat_path), read_matrix(s_hat_path));
    std::cout << "rel_error_x = " << format_full(metrics.rel_error_x) << "\n"
              << "rel_error_s = " << format_full(metrics.rel_error_s) << "\n"
              << "rank_x = " << metrics.rank_x << "\n"
              << "support_precision = " << format_full(metrics.support_precision) << "\n"
              << "support_recall = " << format_full(metrics.support_recall) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted quasi-norm factorization solver for robust PCA"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic low-rank + sparse instance");
    int gen_m = 50, gen_n = 40, gen_rank = 3;
    double gen_corrupt = 0.05, gen_mag = 5.0, gen_observe = 1.0;
    std::uint64_t gen_seed = 0;
    std::string gen_out = ".";
    gen->add_option("--m", gen_m, "rows")->check(CLI::PositiveNumber);
    gen->add_option("--n", gen_n, "cols")->check(CLI::PositiveNumber);
    gen->add_option("--rank", gen_rank, "true rank")->check(CLI::PositiveNumber);
    gen->add_option("--corrupt", gen_corrupt, "corrupted fraction in [0,1)");
    gen->add_option("--mag", gen_mag, "corruption magnitude");
    gen->add_option("--observe", gen_observe, "observed fraction in (0,1]");
    gen->add_option("--seed", gen_seed, "rng seed");
    gen->add_option("--out", gen_out, "output directory");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "run the recovery solver from a config file");
    std::string config_path;
    solve_cmd->add_option("--config", config_path, "flat key = value config file")->required();

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run the randomized theorem checkers");
    bool v_all = false, v_stiefel = false, v_fact = false, v_prox = false;
    int v_trials = 200, v_n = 12, v_r = 5, v_m = 12, v_log_k = 2;
    std::uint64_t v_seed = 1;
    double v_eps = 0.01;
    std::string v_q, v_kind;
    verify_cmd->add_flag("--all", v_all, "run every checker");
    verify_cmd->add_flag("--stiefel", v_stiefel, "singular-value inequality checker");
    verify_cmd->add_flag("--factorization", v_fact, "factorization identity checker");
    verify_cmd->add_flag("--prox", v_prox, "proximal operator grid oracle");
    verify_cmd->add_option("--trials", v_trials, "trials per case");
    verify_cmd->add_option("--seed", v_seed, "base rng seed");
    verify_cmd->add_option("--n", v_n, "ambient dimension (stiefel) / cols (factorization)");
    verify_cmd->add_option("--r", v_r, "factor width");
    verify_cmd->add_option("--m", v_m, "rows for the factorization checker");
    verify_cmd->add_option("--q", v_q, "single Schatten exponent: 2 | 1 | 2/3 | 1/2");
    verify_cmd->add_option("--kind", v_kind,
                           "single regularizer kind for the factorization checker");
    verify_cmd->add_option("--log-k", v_log_k, "log-case exponent k (1 or 2)");
    verify_cmd->add_option("--eps", v_eps, "epsilon for log cases");

    // metrics
    auto* metrics_cmd = app.add_subcommand("metrics", "recovery metrics against ground truth");
    std::string mt_x_true, mt_s_true, mt_x_hat, mt_s_hat;
    metrics_cmd->add_option("--x-true", mt_x_true)->required();
    metrics_cmd->add_option("--s-true", mt_s_true)->required();
    metrics_cmd->add_option("--x-hat", mt_x_hat)->required();
    metrics_cmd->add_option("--s-hat", mt_s_hat)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_gen(gen_m, gen_n, gen_rank, gen_corrupt, gen_mag, gen_observe, gen_seed,
                           gen_out);
        if (solve_cmd->parsed()) return cmd_solve(config_path);
        if (verify_cmd->parsed())
            return cmd_verify(v_all, v_stiefel, v_fact, v_prox, v_trials, v_seed, v_n, v_r, v_m,
                              v_q, v_kind, v_log_k, v_eps);
        if (metrics_cmd->parsed()) return cmd_metrics(mt_x_true, mt_s_true, mt_x_hat, mt_s_hat);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadConfig;
    }
    return kExitBadConfig;
}
