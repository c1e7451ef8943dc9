#pragma once

#include <cstdint>
#include <string_view>

namespace fase {

/// Operation tallies grouped the way the complexity model groups them:
/// complex multiplications, complex additions, and everything else
/// (divisions, comparisons, square roots, absolute values).
struct OpCounts {
    std::uint64_t mul = 0;
    std::uint64_t add = 0;
    std::uint64_t other = 0;

    std::uint64_t total() const noexcept { return mul + add + other; }
    friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

enum class Algorithm { se, fase, table_gen };

std::string_view to_string(Algorithm a) noexcept;

/// Closed-form operation counts for model generation (se, fase) or Gram
/// table generation (table_gen; `iterations` ignored). Throws RangeError on
/// 64-bit overflow and ParameterError on zero arguments.
OpCounts predict_op_counts(Algorithm algo, std::uint64_t rows, std::uint64_t cols,
                           std::uint64_t dict_size, std::uint64_t iterations);

/// Counting policy that compiles to nothing.
struct NoCounter {
    static constexpr bool enabled = false;
    void mul(std::uint64_t) noexcept {}
    void add(std::uint64_t) noexcept {}
    void other(std::uint64_t) noexcept {}
    void div(std::uint64_t) noexcept {}
};

/// Counting policy for instrumented runs. Divisions land in `other` and are
/// additionally tallied on their own.
struct OpCounter {
    static constexpr bool enabled = true;
    OpCounts counts;
    std::uint64_t divisions = 0;

    void mul(std::uint64_t n) noexcept { counts.mul += n; }
    void add(std::uint64_t n) noexcept { counts.add += n; }
    void other(std::uint64_t n) noexcept { counts.other += n; }
    void div(std::uint64_t n) noexcept {
        counts.other += n;
        divisions += n;
    }
};

}  // namespace fase
