#include "fase/pgm.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "fase/errors.hpp"

namespace fase {

namespace {

// Next whitespace-separated header token, skipping '#' comments.
std::string header_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

std::size_t header_number(std::istream& in, const char* what) {
    const std::string tok = header_token(in);
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos || tok.size() > 9) {
        throw FormatError(std::string("PGM: bad ") + what + " '" + tok + "'");
    }
    return std::stoul(tok);
}

}  // namespace

GrayImage read_pgm(std::istream& in) {
    if (header_token(in) != "P5") throw FormatError("PGM: expected a binary P5 file");
    GrayImage img;
    img.width = header_number(in, "width");
    img.height = header_number(in, "height");
    const std::size_t maxval = header_number(in, "maxval");
    if (img.width == 0 || img.height == 0) throw FormatError("PGM: empty image");
    if (maxval == 0 || maxval > 255) throw FormatError("PGM: only 8-bit images are supported");
    img.pixels.resize(img.width * img.height);
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (static_cast<std::size_t>(in.gcount()) != img.pixels.size()) throw FormatError("PGM: truncated pixel data");
    if (maxval != 255) {
        for (auto& p : img.pixels) {
            if (p > maxval) throw FormatError("PGM: pixel exceeds maxval");
            p = static_cast<std::uint8_t>((p * 255 + maxval / 2) / maxval);
        }
    }
    return img;
}

GrayImage load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open image " + path.string());
    return read_pgm(in);
}

void write_pgm(std::ostream& out, const GrayImage& image) {
    if (image.pixels.size() != image.width * image.height || image.pixels.empty()) {
        throw ShapeError("image payload does not match its dimensions");
    }
    out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
    if (!out) throw FormatError("failed to write PGM");
}

void save_pgm(const std::filesystem::path& path, const GrayImage& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    write_pgm(out, image);
}

}  // namespace fase
