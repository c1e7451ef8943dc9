#pragma once

#include <cmath>
#include <cstddef>
#include <optional>

namespace fase {

/// Relative width of the band inside which two selection metrics count as
/// tied, and the absolute floor (as a fraction of the first iteration's
/// selected metric) below which all metrics count as tied.
inline constexpr double kTieRelative = 1e-7;
inline constexpr double kTieFloor = 1e-7;

/// An atom whose weighted energy is at most this fraction of the largest
/// atom energy is degenerate and never selected.
inline constexpr double kDegenerateRelative = 1e-12;

/// Single-pass argmax with the lowest-index tie rule. Candidates are offered
/// in ascending index order; a later candidate replaces the incumbent only if
/// it beats it by more than the tie band. The band is
///     x > max(b * (1 + t), sqrt(b^2 + f^2))
/// for metrics in the magnitude domain, and the exactly equivalent
///     x > max(b * (1 + t)^2, b + f^2)
/// for metrics in the squared-magnitude domain. SE ranks |p|^2 * E while
/// FaSE ranks |R| * D; both decide identically up to rounding.
class TieAwareArgmax {
public:
    enum class Domain { magnitude, squared };

    /// `floor` is expressed in the metric's own domain (f or f^2).
    TieAwareArgmax(Domain domain, double floor) noexcept : domain_(domain), floor_(floor) {}

    void offer(std::size_t k, double metric) noexcept {
        if (!has_best_ || metric > threshold_) {
            has_best_ = true;
            best_ = k;
            value_ = metric;
            threshold_ = threshold_for(metric);
        }
    }

    std::optional<std::size_t> best() const noexcept {
        return has_best_ ? std::optional<std::size_t>(best_) : std::nullopt;
    }
    double value() const noexcept { return value_; }

private:
    double threshold_for(double b) const noexcept {
        constexpr double grow = 1.0 + kTieRelative;
        if (domain_ == Domain::squared) {
            const double rel = b * grow * grow;
            const double abs = b + floor_;
            return rel > abs ? rel : abs;
        }
        const double rel = b * grow;
        const double abs = std::sqrt(b * b + floor_ * floor_);
        return rel > abs ? rel : abs;
    }

    Domain domain_;
    double floor_;
    bool has_best_ = false;
    std::size_t best_ = 0;
    double value_ = 0.0;
    double threshold_ = 0.0;
};

}  // namespace fase
