#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "fase/app.hpp"
#include "fase/errors.hpp"

namespace {

using namespace fase;
using namespace fase::app;

void write_json(const nlohmann::json& j, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
}

void add_config(CLI::App* cmd, ExtrapConfig& cfg) {
    cmd->add_option("--iters", cfg.iterations, "Iterations I")->capture_default_str();
    cmd->add_option("--gamma", cfg.gamma, "Orthogonality deficiency compensation factor")->capture_default_str();
    cmd->add_option("--rho", cfg.rho_hat, "Weight decay base")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Selective extrapolation of missing 2D signal regions"};
    cli.require_subcommand(1);

    // conceal
    ConcealOptions conceal_opts;
    std::string image_path, mask_path, out_path, report_path, reference_path, block_text, tables_path;
    std::uint64_t conceal_seed = 0;
    auto* conceal_cmd = cli.add_subcommand("conceal", "Conceal lost pixels of a PGM image");
    conceal_cmd->add_option("--image", image_path, "Input image (P5 PGM)")->required();
    conceal_cmd->add_option("--mask", mask_path, "Mask image, 0 marks lost pixels")->required();
    conceal_cmd->add_option("--out", out_path, "Output image")->required();
    conceal_cmd->add_option("--report", report_path, "JSON report path, '-' for stdout");
    conceal_cmd->add_option("--reference", reference_path, "Undistorted image for PSNR");
    conceal_cmd->add_option("--dict", conceal_opts.dict_spec, "dft|dct|wht|bdft|union:a+b|file:path")->capture_default_str();
    add_config(conceal_cmd, conceal_opts.cfg);
    conceal_cmd->add_option("--block", block_text, "Tile size WxH; omit to treat the image as one area");
    conceal_cmd->add_option("--support", conceal_opts.support, "Support ring width around each tile")->capture_default_str();
    conceal_cmd->add_option("--tables", tables_path, "Precomputed Gram table file");
    conceal_cmd->add_flag("--fft", conceal_opts.fft, "Use DFT shortcuts for tables and initial products");
    conceal_cmd->add_option("--seed", conceal_seed, "Recorded in the report; concealment is deterministic");
    conceal_cmd->add_flag("--single-thread", conceal_opts.single_thread, "Process blocks on one thread");

    // verify
    VerifyOptions verify_opts;
    std::string verify_size = "8", verify_loss = "4x4", verify_report;
    double table_rho = 0.0;
    auto* verify_cmd = cli.add_subcommand("verify", "Compare the reference and fast algorithms on random signals");
    verify_cmd->add_option("--size", verify_size, "Area size WxH")->capture_default_str();
    verify_cmd->add_option("--dict", verify_opts.dict_spec)->capture_default_str();
    verify_cmd->add_option("--loss", verify_loss, "Central loss block WxH")->capture_default_str();
    add_config(verify_cmd, verify_opts.cfg);
    verify_cmd->add_option("--trials", verify_opts.trials)->capture_default_str();
    verify_cmd->add_option("--seed", verify_opts.seed)->capture_default_str();
    verify_cmd->add_option("--tolerance", verify_opts.tolerance)->capture_default_str();
    verify_cmd->add_flag("--zero-signal", verify_opts.zero_signal, "Use an all-zero signal");
    auto* table_rho_opt = verify_cmd->add_option("--table-rho", table_rho, "Build tables for this rho instead");
    verify_cmd->add_option("--report", verify_report, "JSON report path, '-' for stdout");

    // bench
    BenchOptions bench_opts;
    std::string bench_out, bench_loss;
    bool no_counts = false;
    auto* bench_cmd = cli.add_subcommand("bench", "Time both algorithms and compare operation counts");
    bench_cmd->add_option("--sizes", bench_opts.sizes, "Square area sizes")->delimiter(',')->capture_default_str();
    bench_cmd->add_option("--dict", bench_opts.dict_spec)->capture_default_str();
    bench_cmd->add_option("--atoms", bench_opts.atoms, "Dictionary sizes (first K atoms)")->delimiter(',');
    bench_cmd->add_option("--iters", bench_opts.iterations, "Iteration counts")->delimiter(',')->capture_default_str();
    bench_cmd->add_option("--algos", bench_opts.algos, "se,fase,table")->delimiter(',')->capture_default_str();
    bench_cmd->add_option("--loss", bench_loss, "Central loss block WxH (default: quarter size)");
    bench_cmd->add_option("--gamma", bench_opts.gamma)->capture_default_str();
    bench_cmd->add_option("--rho", bench_opts.rho_hat)->capture_default_str();
    bench_cmd->add_option("--reps", bench_opts.reps)->capture_default_str();
    bench_cmd->add_option("--warmup", bench_opts.warmup)->capture_default_str();
    bench_cmd->add_flag("--no-counts", no_counts, "Skip the instrumented runs");
    bench_cmd->add_flag("--fft", bench_opts.fft, "Build DFT tables with the FFT shortcut");
    bench_cmd->add_flag("--single-thread", bench_opts.single_thread);
    bench_cmd->add_option("--seed", bench_opts.seed)->capture_default_str();
    bench_cmd->add_option("--out", bench_out, "CSV path (default stdout)");

    // tables
    std::string tables_dict = "dct", tables_size = "64", tables_loss = "16x16", tables_mask, tables_out;
    double tables_rho = 0.8;
    bool tables_fft = false;
    auto* tables_cmd = cli.add_subcommand("tables", "Precompute a Gram table file");
    tables_cmd->add_option("--dict", tables_dict)->capture_default_str();
    tables_cmd->add_option("--size", tables_size, "Area size WxH")->capture_default_str();
    tables_cmd->add_option("--loss", tables_loss, "Central loss block WxH")->capture_default_str();
    tables_cmd->add_option("--mask", tables_mask, "Mask PGM defining the area instead of --size/--loss");
    tables_cmd->add_option("--rho", tables_rho)->capture_default_str();
    tables_cmd->add_flag("--fft", tables_fft);
    tables_cmd->add_option("--out", tables_out)->required();

    // dict
    std::string dict_spec = "dct", dict_size = "8", dict_out;
    auto* dict_cmd = cli.add_subcommand("dict", "Write a dictionary file");
    dict_cmd->add_option("--dict", dict_spec)->capture_default_str();
    dict_cmd->add_option("--size", dict_size, "Atom size WxH")->capture_default_str();
    dict_cmd->add_option("--out", dict_out)->required();

    // lossmask
    std::string lm_size, lm_block = "16";
    std::size_t lm_period = 2;
    double lm_fraction = 0.0;
    std::uint64_t lm_seed = 1;
    std::string lm_out;
    auto* lm_cmd = cli.add_subcommand("lossmask", "Generate a block-loss mask");
    lm_cmd->add_option("--size", lm_size, "Image size WxH")->required();
    lm_cmd->add_option("--block", lm_block, "Tile size WxH")->capture_default_str();
    lm_cmd->add_option("--period", lm_period, "Lose every period-th tile in each direction")->capture_default_str();
    auto* lm_fraction_opt = lm_cmd->add_option("--fraction", lm_fraction, "Lose tiles at random with this probability");
    lm_cmd->add_option("--seed", lm_seed)->capture_default_str();
    lm_cmd->add_option("--out", lm_out)->required();

    CLI11_PARSE(cli, argc, argv);

    try {
        if (*conceal_cmd) {
            if (!block_text.empty()) conceal_opts.block = parse_size(block_text);
            if (!tables_path.empty()) conceal_opts.tables = tables_path;
            const GrayImage image = load_pgm(image_path);
            const GrayImage mask = load_pgm(mask_path);
            std::optional<GrayImage> reference;
            if (!reference_path.empty()) reference = load_pgm(reference_path);
            ConcealResult r = conceal(image, mask, conceal_opts, reference ? &*reference : nullptr);
            save_pgm(out_path, r.output);
            r.report["seed"] = conceal_seed;
            if (!report_path.empty()) write_json(r.report, report_path);
            return 0;
        }
        if (*verify_cmd) {
            const Size2 size = parse_size(verify_size);
            const Size2 loss = parse_size(verify_loss);
            verify_opts.rows = size.height;
            verify_opts.cols = size.width;
            verify_opts.loss_rows = loss.height;
            verify_opts.loss_cols = loss.width;
            if (*table_rho_opt) verify_opts.table_rho = table_rho;
            const VerifyResult r = verify(verify_opts);
            write_json(r.report, verify_report);
            if (!r.passed) std::cerr << "verify: at least one trial exceeded the tolerance\n";
            return r.passed ? 0 : 1;
        }
        if (*bench_cmd) {
            if (!bench_loss.empty()) bench_opts.loss = parse_size(bench_loss);
            bench_opts.counts = !no_counts;
            const auto rows = bench(bench_opts, &std::cerr);
            if (bench_out.empty()) {
                write_bench_csv(std::cout, rows);
            } else {
                std::ofstream out(bench_out);
                if (!out) throw FormatError("cannot open " + bench_out + " for writing");
                write_bench_csv(out, rows);
            }
            return 0;
        }
        if (*tables_cmd) {
            std::optional<LossMask> mask;
            if (!tables_mask.empty()) {
                const GrayImage m = load_pgm(tables_mask);
                mask.emplace(m.height, m.width, lost_pixels(m));
            } else {
                const Size2 size = parse_size(tables_size);
                const Size2 loss = parse_size(tables_loss);
                mask = LossMask::central_block(size.height, size.width, loss.height, loss.width);
            }
            const Dictionary dict = make_dictionary(tables_dict, mask->rows(), mask->cols());
            const GramTable t = make_tables(dict, build_weight_field(*mask, tables_rho), tables_fft);
            save_gram_table(tables_out, t);
            return 0;
        }
        if (*dict_cmd) {
            const Size2 size = parse_size(dict_size);
            save_dictionary(dict_out, make_dictionary(dict_spec, size.height, size.width));
            return 0;
        }
        if (*lm_cmd) {
            const std::optional<double> fraction = *lm_fraction_opt ? std::optional<double>(lm_fraction) : std::nullopt;
            save_pgm(lm_out, loss_mask(parse_size(lm_size), parse_size(lm_block), lm_period, fraction, lm_seed));
            return 0;
        }
    } catch (const fase::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
