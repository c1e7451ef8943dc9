#include "fase/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fase/errors.hpp"
#include "fase/hash.hpp"

namespace fase {

namespace {

void check_dims(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
        throw ShapeError("grid dimensions must be positive, got " + std::to_string(rows) + "x" +
                         std::to_string(cols));
    }
}

}  // namespace

Field2D::Field2D(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    check_dims(rows, cols);
    values_.assign(rows * cols, Complex{});
}

Field2D::Field2D(std::size_t rows, std::size_t cols, std::vector<Complex> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    check_dims(rows, cols);
    if (values_.size() != rows * cols) {
        throw ShapeError("field payload has " + std::to_string(values_.size()) +
                         " samples, expected " + std::to_string(rows * cols));
    }
}

Field2D Field2D::from_real(std::size_t rows, std::size_t cols, std::span<const double> values) {
    std::vector<Complex> v(values.begin(), values.end());
    return Field2D(rows, cols, std::move(v));
}

LossMask::LossMask(std::size_t rows, std::size_t cols, std::vector<bool> lost)
    : rows_(rows), cols_(cols), lost_(std::move(lost)) {
    check_dims(rows, cols);
    if (lost_.size() != rows * cols) {
        throw ShapeError("mask has " + std::to_string(lost_.size()) + " flags, expected " +
                         std::to_string(rows * cols));
    }
    if (std::all_of(lost_.begin(), lost_.end(), [](bool b) { return b; })) {
        throw MaskError("loss mask leaves no support samples");
    }
}

LossMask LossMask::none(std::size_t rows, std::size_t cols) {
    return LossMask(rows, cols, std::vector<bool>(rows * cols, false));
}

LossMask LossMask::block(std::size_t rows, std::size_t cols, std::size_t top, std::size_t left,
                         std::size_t height, std::size_t width) {
    if (top + height > rows || left + width > cols) {
        throw ParameterError("loss block exceeds the extrapolation area");
    }
    std::vector<bool> lost(rows * cols, false);
    for (std::size_t m = top; m < top + height; ++m) {
        for (std::size_t n = left; n < left + width; ++n) lost[m * cols + n] = true;
    }
    return LossMask(rows, cols, std::move(lost));
}

LossMask LossMask::central_block(std::size_t rows, std::size_t cols, std::size_t height,
                                 std::size_t width) {
    if (height > rows || width > cols) {
        throw ParameterError("loss block exceeds the extrapolation area");
    }
    return block(rows, cols, (rows - height) / 2, (cols - width) / 2, height, width);
}

std::size_t LossMask::lost_count() const noexcept {
    return static_cast<std::size_t>(std::count(lost_.begin(), lost_.end(), true));
}

WeightField::WeightField(std::size_t rows, std::size_t cols, std::vector<double> weights)
    : rows_(rows), cols_(cols), weights_(std::move(weights)) {
    check_dims(rows, cols);
    if (weights_.size() != rows * cols) {
        throw ShapeError("weight field has " + std::to_string(weights_.size()) +
                         " entries, expected " + std::to_string(rows * cols));
    }
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw ParameterError("weights must be finite and nonnegative");
        }
    }
}

std::uint64_t WeightField::hash() const noexcept {
    ContentHash h;
    h.word(rows_).word(cols_).values(weights_);
    return h.digest();
}

void ExtrapConfig::validate() const {
    if (iterations == 0) throw ParameterError("iteration count must be at least 1");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ParameterError("gamma must lie in (0, 1]");
    if (!(rho_hat > 0.0 && rho_hat <= 1.0)) throw ParameterError("rho_hat must lie in (0, 1]");
}

WeightField build_weight_field(const LossMask& mask, double rho_hat) {
    if (!(rho_hat > 0.0 && rho_hat <= 1.0)) throw ParameterError("rho_hat must lie in (0, 1]");
    const std::size_t M = mask.rows();
    const std::size_t N = mask.cols();
    const double cm = (static_cast<double>(M) - 1.0) / 2.0;
    const double cn = (static_cast<double>(N) - 1.0) / 2.0;
    std::vector<double> w(M * N, 0.0);
    for (std::size_t m = 0; m < M; ++m) {
        for (std::size_t n = 0; n < N; ++n) {
            if (mask.lost(m, n)) continue;
            const double dm = static_cast<double>(m) - cm;
            const double dn = static_cast<double>(n) - cn;
            w[m * N + n] = std::pow(rho_hat, std::sqrt(dm * dm + dn * dn));
        }
    }
    // rho_hat^dist underflows only for absurd grid sizes
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!mask.lost(i) && w[i] == 0.0) w[i] = std::numeric_limits<double>::min();
    }
    return WeightField(M, N, std::move(w));
}

double psnr_over_region(const Field2D& reference, const Field2D& candidate, const LossMask& region) {
    if (!reference.same_shape(candidate) || !region.same_shape(reference)) {
        throw ShapeError("PSNR inputs and region must share one shape");
    }
    double sse = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        if (!region.lost(i)) continue;
        const double d = reference[i].real() - candidate[i].real();
        sse += d * d;
        ++count;
    }
    if (count == 0) throw ParameterError("PSNR region is empty");
    const double mse = sse / static_cast<double>(count);
    if (mse == 0.0) return kPsnrIdentical;
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

}  // namespace fase
