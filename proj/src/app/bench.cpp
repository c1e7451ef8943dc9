#include <algorithm>
#include <chrono>
#include <ostream>
#include <random>

#include "fase/app.hpp"
#include "fase/errors.hpp"
#include "fase/fase.hpp"
#include "fase/opcount.hpp"
#include "fase/se.hpp"

namespace fase::app {

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double median_seconds(std::size_t warmup, std::size_t reps, F&& run) {
    for (std::size_t i = 0; i < warmup; ++i) run();
    std::vector<double> t(reps);
    for (double& x : t) {
        const auto t0 = Clock::now();
        run();
        x = std::chrono::duration<double>(Clock::now() - t0).count();
    }
    std::sort(t.begin(), t.end());
    return reps % 2 ? t[reps / 2] : 0.5 * (t[reps / 2 - 1] + t[reps / 2]);
}

BenchRow make_row(std::string algo, std::size_t n, std::size_t K, std::size_t iters) {
    BenchRow row;
    row.algo = std::move(algo);
    row.rows = n;
    row.cols = n;
    row.dict = K;
    row.iters = iters;
    return row;
}

void set_predicted(BenchRow& row, const OpCounts& c) {
    row.mul_pred = c.mul;
    row.add_pred = c.add;
    row.other_pred = c.other;
}

void set_measured(BenchRow& row, const OpCounts& c) {
    row.mul_meas = c.mul;
    row.add_meas = c.add;
    row.other_meas = c.other;
}

}  // namespace

std::vector<BenchRow> bench(const BenchOptions& o, std::ostream* progress) {
    if (o.reps == 0) throw ParameterError("at least one timed repetition is required");
    if (o.sizes.empty() || o.iterations.empty() || o.algos.empty()) throw ParameterError("empty benchmark grid");
    for (const std::string& a : o.algos) {
        if (a != "se" && a != "fase" && a != "table") throw ParameterError("unknown algorithm '" + a + "'");
    }
    for (std::size_t i : o.iterations) {
        if (i == 0) throw ParameterError("iteration counts must be positive");
    }
    set_single_thread(o.single_thread);
    const auto wants = [&](std::string_view a) { return std::find(o.algos.begin(), o.algos.end(), a) != o.algos.end(); };

    std::vector<BenchRow> rows;
    for (std::size_t n : o.sizes) {
        const Dictionary full = make_dictionary(o.dict_spec, n, n);
        const Size2 loss = o.loss.value_or(Size2{std::max<std::size_t>(1, n / 4), std::max<std::size_t>(1, n / 4)});
        const LossMask mask = LossMask::central_block(n, n, loss.height, loss.width);
        const WeightField weight = build_weight_field(mask, o.rho_hat);
        std::mt19937_64 rng(o.seed + n);
        std::uniform_real_distribution<double> u(0.0, 255.0);
        std::vector<double> v(n * n);
        for (double& x : v) x = u(rng);
        const Field2D signal = Field2D::from_real(n, n, v);

        const std::vector<std::size_t> atoms = o.atoms.empty() ? std::vector<std::size_t>{full.size()} : o.atoms;
        for (std::size_t K : atoms) {
            if (K > full.size()) continue;
            const Dictionary dict = truncate_dictionary(full, K);
            if (progress) *progress << "size " << n << "x" << n << ", " << K << " atoms\n";

            std::optional<GramTable> tables;
            if (wants("table") || wants("fase")) {
                BenchRow row = make_row("table", n, K, 0);
                set_predicted(row, predict_op_counts(Algorithm::table_gen, n, n, K, 1));
                if (wants("table")) {
                    row.seconds = median_seconds(o.warmup, o.reps, [&] { tables = make_tables(dict, weight, o.fft); });
                    rows.push_back(row);
                } else {
                    tables = make_tables(dict, weight, o.fft);
                }
            }
            for (std::size_t iters : o.iterations) {
                const ExtrapConfig cfg{iters, o.gamma, o.rho_hat};
                if (wants("se")) {
                    BenchRow row = make_row("se", n, K, iters);
                    set_predicted(row, predict_op_counts(Algorithm::se, n, n, K, iters));
                    row.seconds = median_seconds(o.warmup, o.reps, [&] { (void)se_extrapolate(signal, mask, dict, cfg); });
                    if (o.counts) set_measured(row, se_extrapolate_counted(signal, mask, dict, cfg).second.counts);
                    rows.push_back(row);
                    if (progress) *progress << "  se   I=" << iters << " " << row.seconds << " s\n";
                }
                if (wants("fase")) {
                    BenchRow row = make_row("fase", n, K, iters);
                    set_predicted(row, predict_op_counts(Algorithm::fase, n, n, K, iters));
                    row.seconds = median_seconds(o.warmup, o.reps,
                                                 [&] { (void)fase_extrapolate(signal, mask, dict, *tables, cfg); });
                    if (o.counts) set_measured(row, fase_extrapolate_counted(signal, mask, dict, *tables, cfg).second.counts);
                    rows.push_back(row);
                    if (progress) *progress << "  fase I=" << iters << " " << row.seconds << " s\n";
                }
            }
        }
    }
    return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << kBenchHeader << '\n';
    const auto opt = [](const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : std::string(); };
    for (const BenchRow& r : rows) {
        out << r.algo << ',' << r.rows << ',' << r.cols << ',' << r.dict << ',' << r.iters << ',' << r.seconds << ','
            << r.mul_pred << ',' << r.add_pred << ',' << r.other_pred << ',' << opt(r.mul_meas) << ','
            << opt(r.add_meas) << ',' << opt(r.other_meas) << '\n';
    }
}

}  // namespace fase::app
