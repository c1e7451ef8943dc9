#include <algorithm>
#include <random>

#include "fase/app.hpp"
#include "fase/errors.hpp"
#include "fase/fase.hpp"
#include "fase/se.hpp"

namespace fase::app {

namespace {

constexpr std::size_t kMaxSamples = 4096;
constexpr std::size_t kMaxAtoms = 4096;

Field2D trial_signal(const VerifyOptions& o, std::size_t trial) {
    if (o.zero_signal) return Field2D(o.rows, o.cols);
    std::seed_seq seq{o.seed, static_cast<std::uint64_t>(trial)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> u(0.0, 255.0);
    std::vector<double> v(o.rows * o.cols);
    for (double& x : v) x = u(rng);
    return Field2D::from_real(o.rows, o.cols, v);
}

}  // namespace

VerifyResult verify(const VerifyOptions& o) {
    o.cfg.validate();
    if (o.rows * o.cols > kMaxSamples) throw ParameterError("verify is capped at 4096 samples per area");
    if (o.trials == 0) throw ParameterError("at least one trial is required");
    const Dictionary dict = make_dictionary(o.dict_spec, o.rows, o.cols);
    if (dict.size() > kMaxAtoms) throw ParameterError("verify is capped at 4096 atoms");
    const LossMask mask = LossMask::central_block(o.rows, o.cols, o.loss_rows, o.loss_cols);
    const WeightField weight = build_weight_field(mask, o.cfg.rho_hat);
    const GramTable tables =
        build_gram_tables(dict, o.table_rho ? build_weight_field(mask, *o.table_rho) : weight);

    VerifyResult result;
    result.passed = true;
    nlohmann::json trials = nlohmann::json::array();
    for (std::size_t t = 0; t < o.trials; ++t) {
        const Field2D s = trial_signal(o, t);

        // Direct re-evaluation of every scalar product against the reference
        // residual after each iteration.
        std::vector<std::vector<Complex>> direct;
        SeHooks hooks;
        hooks.after_iteration = [&](std::size_t, const Field2D& r) {
            direct.push_back(initial_scalar_products(r, weight, dict).values);
        };
        const SeExtrapolation ref = se_extrapolate(s, mask, dict, o.cfg, hooks);

        std::vector<std::vector<Complex>> recursive;
        FaseOptions fopts;
        fopts.after_iteration = [&](std::size_t, std::span<const Complex> R) {
            recursive.emplace_back(R.begin(), R.end());
        };
        const FaseExtrapolation fast = fase_extrapolate(s, mask, dict, tables, o.cfg, fopts);

        std::size_t agree = 0;
        while (agree < ref.trace.size() && ref.trace[agree].atom == fast.trace[agree].atom) ++agree;
        const bool same_sequence = agree == ref.trace.size();

        double coef_scale = 0.0;
        for (const auto& rec : ref.trace) coef_scale = std::max(coef_scale, std::abs(rec.coefficient));
        double coef_dev = 0.0;
        for (std::size_t i = 0; i < agree; ++i) {
            coef_dev = std::max(coef_dev, std::abs(fast.trace[i].coefficient - ref.trace[i].coefficient));
        }
        if (coef_scale > 0.0) coef_dev /= coef_scale;

        double r_scale = 0.0;
        for (const Complex& x : initial_scalar_products(s, weight, dict).values) r_scale = std::max(r_scale, std::abs(x));
        double r_dev = 0.0;
        for (std::size_t i = 0; i < agree; ++i) {
            for (std::size_t k = 0; k < dict.size(); ++k) r_dev = std::max(r_dev, std::abs(recursive[i][k] - direct[i][k]));
        }
        if (r_scale > 0.0) r_dev /= r_scale;

        const bool ok = same_sequence && coef_dev <= o.tolerance && r_dev <= o.tolerance;
        result.passed = result.passed && ok;
        nlohmann::json entry{{"trial", t},
                             {"sequence_equal", same_sequence},
                             {"max_coefficient_deviation", coef_dev},
                             {"max_recursion_deviation", r_dev},
                             {"passed", ok}};
        if (!same_sequence) entry["first_mismatch"] = agree + 1;
        trials.push_back(std::move(entry));
    }
    result.report = {{"schema", "fase-verify-report"},
                     {"version", kReportVersion},
                     {"rows", o.rows},
                     {"cols", o.cols},
                     {"dictionary", {{"spec", o.dict_spec}, {"size", dict.size()}}},
                     {"loss", {o.loss_rows, o.loss_cols}},
                     {"config", {{"iterations", o.cfg.iterations}, {"gamma", o.cfg.gamma}, {"rho_hat", o.cfg.rho_hat}}},
                     {"seed", o.seed},
                     {"tolerance", o.tolerance},
                     {"trials", std::move(trials)},
                     {"passed", result.passed}};
    return result;
}

}  // namespace fase::app
