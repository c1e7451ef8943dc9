#include "fase/opcount.hpp"

#include "fase/errors.hpp"

namespace fase {

std::string_view to_string(Algorithm a) noexcept {
    switch (a) {
        case Algorithm::se: return "se";
        case Algorithm::fase: return "fase";
        case Algorithm::table_gen: return "table";
    }
    return "se";
}

namespace {

// Checked unsigned arithmetic.
struct U {
    std::uint64_t v;
};

U operator*(U a, U b) {
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a.v, b.v, &r)) throw RangeError("operation count overflows 64 bits");
    return {r};
}

U operator+(U a, U b) {
    std::uint64_t r = 0;
    if (__builtin_add_overflow(a.v, b.v, &r)) throw RangeError("operation count overflows 64 bits");
    return {r};
}

}  // namespace

OpCounts predict_op_counts(Algorithm algo, std::uint64_t rows, std::uint64_t cols,
                           std::uint64_t dict_size, std::uint64_t iterations) {
    if (rows == 0 || cols == 0 || dict_size == 0) {
        throw ParameterError("operation-count parameters must be positive");
    }
    if (algo != Algorithm::table_gen && iterations == 0) {
        throw ParameterError("iteration count must be positive");
    }
    const U mn = U{rows} * U{cols};
    const U d{dict_size};
    const U it{iterations};
    const U one{1}, two{2}, three{3}, six{6};
    switch (algo) {
        case Algorithm::se:
            return {(it * (six * mn * d + d + two * mn + one)).v,
                    (it * (three * mn * d + two * mn)).v,
                    (three * it * d).v};
        case Algorithm::fase:
            return {(two * mn * d + it * (two * d + mn + one)).v,
                    (mn * d + it * (d + mn)).v,
                    (two * it * d).v};
        case Algorithm::table_gen: {
            // (|D|^2 + |D|) is even, so the halves are exact.
            const U pairs2 = d * d + d;
            const U half{pairs2.v / 2};
            return {(pairs2 * mn).v, (half * mn).v, (half * mn + d).v};
        }
    }
    throw ParameterError("unknown algorithm");
}

}  // namespace fase
