#pragma once

// Command implementations behind the `fase` executable. Each command is a
// plain function so it can be tested without spawning a process.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fase/dictionary.hpp"
#include "fase/gram.hpp"
#include "fase/grid.hpp"
#include "fase/pgm.hpp"

namespace fase::app {

inline constexpr int kReportVersion = 1;

struct Size2 {
    std::size_t width = 0;
    std::size_t height = 0;
    friend bool operator==(const Size2&, const Size2&) = default;
};

/// "WxH" or a single "N" for N x N.
Size2 parse_size(std::string_view text);

/// dft | dct | wht | bdft | union:a+b[+c...] | file:path. A file dictionary
/// must already have the requested shape.
Dictionary make_dictionary(std::string_view spec, std::size_t rows, std::size_t cols);

/// First `count` atoms of `dict`.
Dictionary truncate_dictionary(const Dictionary& dict, std::size_t count);

/// Gram tables for one extrapolation area; `fft` uses the DFT shortcut when
/// every atom is frequency tagged and falls back to the direct build otherwise.
GramTable make_tables(const Dictionary& dict, const WeightField& weight, bool fft);

/// Pixels equal to 0 in a mask image mark the loss area.
std::vector<bool> lost_pixels(const GrayImage& mask);

struct ConcealOptions {
    std::string dict_spec = "dct";
    ExtrapConfig cfg;
    std::optional<Size2> block;  // unset: whole image is one area
    std::size_t support = 24;
    std::optional<std::filesystem::path> tables;
    bool fft = false;
    bool single_thread = false;
};

struct ConcealResult {
    GrayImage output;
    nlohmann::json report;
};

ConcealResult conceal(const GrayImage& image, const GrayImage& mask, const ConcealOptions& options,
                      const GrayImage* reference = nullptr);

struct VerifyOptions {
    std::size_t rows = 8;
    std::size_t cols = 8;
    std::string dict_spec = "dct";
    std::size_t loss_rows = 4;
    std::size_t loss_cols = 4;
    ExtrapConfig cfg{50, 0.5, 0.8};
    std::size_t trials = 20;
    std::uint64_t seed = 1;
    bool zero_signal = false;
    /// Build the tables for a different rho to provoke a stale-table error.
    std::optional<double> table_rho;
    double tolerance = 1e-9;
};

struct VerifyResult {
    bool passed = false;
    nlohmann::json report;
};

VerifyResult verify(const VerifyOptions& options);

struct BenchOptions {
    std::vector<std::size_t> sizes{16};
    std::string dict_spec = "dft";
    std::vector<std::size_t> atoms;  // empty: full dictionary
    std::vector<std::size_t> iterations{25, 250};
    std::vector<std::string> algos{"se", "fase"};
    std::optional<Size2> loss;       // default: central quarter-size block
    double gamma = 0.5;
    double rho_hat = 0.8;
    std::size_t reps = 3;
    std::size_t warmup = 1;
    bool counts = true;
    bool fft = false;
    bool single_thread = false;
    std::uint64_t seed = 1;
};

struct BenchRow {
    std::string algo;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t dict = 0;
    std::size_t iters = 0;
    double seconds = 0.0;
    std::uint64_t mul_pred = 0, add_pred = 0, other_pred = 0;
    std::optional<std::uint64_t> mul_meas, add_meas, other_meas;
};

inline constexpr std::string_view kBenchHeader =
    "algo,M,N,dict,iters,seconds,mul_pred,add_pred,other_pred,mul_meas,add_meas,other_meas";

std::vector<BenchRow> bench(const BenchOptions& options, std::ostream* progress = nullptr);
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

/// Regular-grid loss pattern over tiles of `block` size. A tile is lost when
/// its row and column index are both congruent to period/2 modulo `period`
/// and it does not touch the image border. With `fraction` set, each tile is
/// lost independently with that probability instead, drawn from `seed`.
/// Lost pixels are 0, received pixels 255.
GrayImage loss_mask(Size2 image, Size2 block, std::size_t period, std::optional<double> fraction,
                    std::uint64_t seed);

/// Applies a single-thread limit to OpenMP regions for the process.
void set_single_thread(bool single);

}  // namespace fase::app
