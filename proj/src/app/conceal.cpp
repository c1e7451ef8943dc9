#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>

#include "fase/app.hpp"
#include "fase/errors.hpp"
#include "fase/fase.hpp"

namespace fase::app {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Rect {
    std::size_t top = 0, left = 0, rows = 0, cols = 0;
};

nlohmann::json to_json(const Rect& r) {
    return {{"top", r.top}, {"left", r.left}, {"rows", r.rows}, {"cols", r.cols}};
}

struct Job {
    Rect tile;
    Rect area;
    std::size_t lost = 0;
    std::uint64_t table_key = 0;
    std::vector<double> values;  // unclamped model output over the tile, row-major
    double max_imag = 0.0;
    double seconds = 0.0;
    IterationTrace trace;
};

std::uint8_t to_pixel(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

double psnr_from_sse(double sse, std::size_t count) {
    if (sse == 0.0) return kPsnrIdentical;
    return 10.0 * std::log10(255.0 * 255.0 / (sse / static_cast<double>(count)));
}

}  // namespace

ConcealResult conceal(const GrayImage& image, const GrayImage& mask, const ConcealOptions& options,
                      const GrayImage* reference) {
    const auto t_start = Clock::now();
    options.cfg.validate();
    if (image.width != mask.width || image.height != mask.height) {
        throw ShapeError("image and mask dimensions differ");
    }
    if (reference && (reference->width != image.width || reference->height != image.height)) {
        throw ShapeError("reference and image dimensions differ");
    }
    set_single_thread(options.single_thread);
    const std::size_t H = image.height;
    const std::size_t W = image.width;
    const std::vector<bool> lost = lost_pixels(mask);

    // Tiles and their extrapolation areas. Without --block the whole image is
    // one area; otherwise every tile is centred in a fixed-size area that is
    // shifted where needed to stay inside the image.
    const Size2 block = options.block.value_or(Size2{W, H});
    if (block.width == 0 || block.height == 0) throw ParameterError("block size must be positive");
    const std::size_t area_rows = options.block ? std::min(H, block.height + 2 * options.support) : H;
    const std::size_t area_cols = options.block ? std::min(W, block.width + 2 * options.support) : W;

    std::vector<Job> jobs;
    for (std::size_t top = 0; top < H; top += block.height) {
        for (std::size_t left = 0; left < W; left += block.width) {
            Job job;
            job.tile = {top, left, std::min(block.height, H - top), std::min(block.width, W - left)};
            for (std::size_t r = 0; r < job.tile.rows; ++r) {
                for (std::size_t c = 0; c < job.tile.cols; ++c) job.lost += lost[(top + r) * W + left + c];
            }
            if (job.lost == 0) continue;
            const auto place = [](std::size_t start, std::size_t margin, std::size_t extent, std::size_t limit) {
                const std::size_t s = start > margin ? start - margin : 0;
                return std::min(s, limit - extent);
            };
            const std::size_t margin_r = (area_rows - job.tile.rows) / 2;
            const std::size_t margin_c = (area_cols - job.tile.cols) / 2;
            job.area = {place(top, margin_r, area_rows, H), place(left, margin_c, area_cols, W), area_rows, area_cols};
            jobs.push_back(std::move(job));
        }
    }

    ConcealResult result{image, {}};
    nlohmann::json report;
    report["schema"] = "fase-conceal-report";
    report["version"] = kReportVersion;
    report["image"] = {{"width", W}, {"height", H}};
    report["config"] = {{"iterations", options.cfg.iterations},
                        {"gamma", options.cfg.gamma},
                        {"rho_hat", options.cfg.rho_hat},
                        {"block", options.block ? nlohmann::json::array({block.width, block.height}) : nlohmann::json()},
                        {"support", options.block ? nlohmann::json(options.support) : nlohmann::json()},
                        {"fft", options.fft},
                        {"single_thread", options.single_thread},
                        {"tables", options.tables ? nlohmann::json(options.tables->string()) : nlohmann::json()}};
    std::size_t total_lost = 0;
    for (bool b : lost) total_lost += b;
    report["lost_pixels"] = total_lost;

    if (jobs.empty()) {
        report["dictionary"] = {{"spec", options.dict_spec}, {"size", nullptr}, {"rows", area_rows}, {"cols", area_cols}};
        report["blocks"] = nlohmann::json::array();
        report["timing"] = {{"tables_seconds", 0.0}, {"extrapolation_seconds", 0.0}, {"total_seconds", seconds_since(t_start)}};
        report["psnr"] = nullptr;
        report["max_imag"] = 0.0;
        result.report = std::move(report);
        return result;
    }

    const Dictionary dict = make_dictionary(options.dict_spec, area_rows, area_cols);
    report["dictionary"] = {{"spec", options.dict_spec}, {"size", dict.size()}, {"rows", area_rows}, {"cols", area_cols}};

    // One Gram table per distinct weight field.
    const auto t_tables = Clock::now();
    std::vector<LossMask> masks;
    std::map<std::uint64_t, GramTable> tables;
    std::optional<GramTable> loaded;
    if (options.tables) loaded = load_gram_table(*options.tables);
    for (Job& job : jobs) {
        std::vector<bool> area_lost(area_rows * area_cols);
        for (std::size_t r = 0; r < area_rows; ++r) {
            for (std::size_t c = 0; c < area_cols; ++c) {
                area_lost[r * area_cols + c] = lost[(job.area.top + r) * W + job.area.left + c];
            }
        }
        masks.emplace_back(area_rows, area_cols, std::move(area_lost));
        const WeightField weight = build_weight_field(masks.back(), options.cfg.rho_hat);
        job.table_key = provenance_hash(dict, weight);
        if (loaded) {
            if (loaded->provenance() != job.table_key || loaded->size() != dict.size()) {
                throw StaleTableError("table file " + options.tables->string() +
                                      " does not match the area around the block at row " +
                                      std::to_string(job.tile.top) + ", column " + std::to_string(job.tile.left));
            }
            continue;
        }
        if (!tables.contains(job.table_key)) tables.emplace(job.table_key, make_tables(dict, weight, options.fft));
    }
    const double tables_seconds = seconds_since(t_tables);

    const auto t_extrap = Clock::now();
    std::exception_ptr failure;
    FaseOptions fase_options;
    fase_options.fft_initial_products = options.fft;
    const long n_jobs = static_cast<long>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1) if (!options.single_thread)
    for (long j = 0; j < n_jobs; ++j) {
        try {
            Job& job = jobs[static_cast<std::size_t>(j)];
            const auto t0 = Clock::now();
            std::vector<Complex> s(area_rows * area_cols);
            for (std::size_t r = 0; r < area_rows; ++r) {
                for (std::size_t c = 0; c < area_cols; ++c) {
                    const std::size_t i = (job.area.top + r) * W + job.area.left + c;
                    s[r * area_cols + c] = lost[i] ? 0.0 : static_cast<double>(image.pixels[i]);
                }
            }
            const Field2D signal(area_rows, area_cols, std::move(s));
            const GramTable& t = loaded ? *loaded : tables.at(job.table_key);
            const FaseExtrapolation run = fase_extrapolate(signal, masks[static_cast<std::size_t>(j)], dict, t,
                                                           options.cfg, fase_options);
            job.values.assign(job.tile.rows * job.tile.cols, 0.0);
            for (std::size_t r = 0; r < job.tile.rows; ++r) {
                for (std::size_t c = 0; c < job.tile.cols; ++c) {
                    const std::size_t ar = job.tile.top + r - job.area.top;
                    const std::size_t ac = job.tile.left + c - job.area.left;
                    const Complex g = run.model_field(ar, ac);
                    job.values[r * job.tile.cols + c] = g.real();
                    if (lost[(job.tile.top + r) * W + job.tile.left + c]) {
                        job.max_imag = std::max(job.max_imag, std::abs(g.imag()));
                    }
                }
            }
            job.trace = run.trace;
            job.seconds = seconds_since(t0);
        } catch (...) {
#pragma omp critical(fase_conceal_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    const double extrap_seconds = seconds_since(t_extrap);

    nlohmann::json blocks = nlohmann::json::array();
    double sse_total = 0.0;
    double max_imag = 0.0;
    for (const Job& job : jobs) {
        double sse = 0.0;
        for (std::size_t r = 0; r < job.tile.rows; ++r) {
            for (std::size_t c = 0; c < job.tile.cols; ++c) {
                const std::size_t i = (job.tile.top + r) * W + job.tile.left + c;
                if (!lost[i]) continue;
                const double v = job.values[r * job.tile.cols + c];
                result.output.pixels[i] = to_pixel(v);
                if (reference) {
                    const double e = v - reference->pixels[i];
                    sse += e * e;
                }
            }
        }
        sse_total += sse;
        max_imag = std::max(max_imag, job.max_imag);
        nlohmann::json trace = nlohmann::json::array();
        for (const IterationRecord& rec : job.trace) {
            trace.push_back({{"nu", rec.nu},
                             {"atom", rec.atom},
                             {"coefficient", {rec.coefficient.real(), rec.coefficient.imag()}}});
        }
        blocks.push_back({{"tile", to_json(job.tile)},
                          {"area", to_json(job.area)},
                          {"lost", job.lost},
                          {"iterations", job.trace.size()},
                          {"seconds", job.seconds},
                          {"max_imag", job.max_imag},
                          {"psnr", reference ? nlohmann::json(psnr_from_sse(sse, job.lost)) : nlohmann::json()},
                          {"trace", std::move(trace)}});
    }
    report["blocks"] = std::move(blocks);
    report["timing"] = {{"tables_seconds", tables_seconds},
                        {"extrapolation_seconds", extrap_seconds},
                        {"total_seconds", seconds_since(t_start)}};
    report["psnr"] = reference ? nlohmann::json(psnr_from_sse(sse_total, total_lost)) : nlohmann::json();
    report["max_imag"] = max_imag;
    result.report = std::move(report);
    return result;
}

}  // namespace fase::app
