#pragma once

#include <bit>
#include <cstdint>
#include <span>

namespace fase {

/// FNV-1a over 64-bit words. Used to bind Gram tables to the exact
/// dictionary and weight field they were computed from.
class ContentHash {
public:
    ContentHash& word(std::uint64_t w) noexcept {
        for (int i = 0; i < 8; ++i) {
            state_ ^= (w >> (8 * i)) & 0xffu;
            state_ *= kPrime;
        }
        return *this;
    }

    ContentHash& value(double d) noexcept {
        // +0.0 and -0.0 hash alike
        return word(d == 0.0 ? 0u : std::bit_cast<std::uint64_t>(d));
    }

    ContentHash& values(std::span<const double> ds) noexcept {
        for (double d : ds) value(d);
        return *this;
    }

    std::uint64_t digest() const noexcept { return state_; }

private:
    static constexpr std::uint64_t kOffset = 0xcbf29ce484222325ull;
    static constexpr std::uint64_t kPrime = 0x100000001b3ull;
    std::uint64_t state_ = kOffset;
};

}  // namespace fase
