#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fase {

using Complex = std::complex<double>;

/// Row-major M x N grid of complex samples. Holds signals, residuals,
/// atoms and models alike.
class Field2D {
public:
    Field2D(std::size_t rows, std::size_t cols);
    Field2D(std::size_t rows, std::size_t cols, std::vector<Complex> values);

    static Field2D from_real(std::size_t rows, std::size_t cols, std::span<const double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return values_.size(); }

    Complex& operator()(std::size_t m, std::size_t n) { return values_[m * cols_ + n]; }
    const Complex& operator()(std::size_t m, std::size_t n) const { return values_[m * cols_ + n]; }
    Complex& operator[](std::size_t i) { return values_[i]; }
    const Complex& operator[](std::size_t i) const { return values_[i]; }

    std::span<Complex> values() noexcept { return values_; }
    std::span<const Complex> values() const noexcept { return values_; }

    bool same_shape(const Field2D& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    friend bool operator==(const Field2D&, const Field2D&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Complex> values_;
};

/// Partition of the extrapolation area: true marks the loss area B,
/// false the support area A. The support is never empty.
class LossMask {
public:
    LossMask(std::size_t rows, std::size_t cols, std::vector<bool> lost);

    /// Mask with no lost samples.
    static LossMask none(std::size_t rows, std::size_t cols);
    /// Mask losing the block [top, top+height) x [left, left+width).
    static LossMask block(std::size_t rows, std::size_t cols, std::size_t top, std::size_t left,
                          std::size_t height, std::size_t width);
    /// Block of the given size centred as closely as integer offsets allow.
    static LossMask central_block(std::size_t rows, std::size_t cols, std::size_t height,
                                  std::size_t width);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return lost_.size(); }

    bool lost(std::size_t m, std::size_t n) const { return lost_[m * cols_ + n]; }
    bool lost(std::size_t i) const { return lost_[i]; }
    std::size_t lost_count() const noexcept;

    bool same_shape(const Field2D& f) const noexcept {
        return rows_ == f.rows() && cols_ == f.cols();
    }

    friend bool operator==(const LossMask&, const LossMask&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<bool> lost_;
};

/// Nonnegative per-sample weight w[m,n]; exactly zero on the loss area.
class WeightField {
public:
    WeightField(std::size_t rows, std::size_t cols, std::vector<double> weights);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return weights_.size(); }

    double operator()(std::size_t m, std::size_t n) const { return weights_[m * cols_ + n]; }
    double operator[](std::size_t i) const { return weights_[i]; }
    std::span<const double> values() const noexcept { return weights_; }

    /// Content hash over shape and the exact bit patterns of the weights.
    std::uint64_t hash() const noexcept;

    friend bool operator==(const WeightField&, const WeightField&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> weights_;
};

/// Parameters of one model-generation run.
struct ExtrapConfig {
    std::size_t iterations = 250;
    double gamma = 0.5;
    double rho_hat = 0.8;

    /// Throws ParameterError unless I >= 1, 0 < gamma <= 1 and 0 < rho_hat <= 1.
    void validate() const;
};

/// w = rho_hat^dist on the support, 0 on the loss area; dist measured from
/// the fractional grid centre ((M-1)/2, (N-1)/2).
WeightField build_weight_field(const LossMask& mask, double rho_hat);

/// Sentinel returned by psnr_over_region for a zero-error region.
inline constexpr double kPsnrIdentical = 99.0;

/// PSNR in dB with peak 255 over the samples flagged lost in `region`.
/// Only real parts are compared.
double psnr_over_region(const Field2D& reference, const Field2D& candidate, const LossMask& region);

}  // namespace fase
