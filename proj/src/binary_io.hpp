#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>

namespace fase::detail {

inline std::uint64_t to_little(std::uint64_t v) noexcept {
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t r = 0;
        for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
        return r;
    }
    return v;
}

inline void put_u64(std::ostream& out, std::uint64_t v) {
    v = to_little(v);
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

inline void put_f64(std::ostream& out, double d) { put_u64(out, std::bit_cast<std::uint64_t>(d)); }

inline bool get_u64(std::istream& in, std::uint64_t& v) {
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) return false;
    v = to_little(v);
    return true;
}

inline bool get_f64(std::istream& in, double& d) {
    std::uint64_t v = 0;
    if (!get_u64(in, v)) return false;
    d = std::bit_cast<double>(v);
    return true;
}

}  // namespace fase::detail
