#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace fase {

/// 8-bit grayscale raster, row-major.
struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;

    std::uint8_t& at(std::size_t row, std::size_t col) { return pixels[row * width + col]; }
    std::uint8_t at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
    friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

/// Binary PGM (P5) with maxval <= 255. Comments in the header are skipped.
GrayImage read_pgm(std::istream& in);
GrayImage load_pgm(const std::filesystem::path& path);
void write_pgm(std::ostream& out, const GrayImage& image);
void save_pgm(const std::filesystem::path& path, const GrayImage& image);

}  // namespace fase
