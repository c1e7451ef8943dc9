#include <omp.h>

#include <charconv>
#include <random>

#include "fase/app.hpp"
#include "fase/errors.hpp"
#include "fase/transform.hpp"

namespace fase::app {

namespace {

std::size_t parse_count(std::string_view text, std::string_view what) {
    std::size_t v = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size() || v == 0) {
        throw ParameterError("bad " + std::string(what) + " '" + std::string(text) + "'");
    }
    return v;
}

Dictionary generated(std::string_view name, std::size_t rows, std::size_t cols) {
    if (name == "dft") return generate_dictionary(Family::dft, rows, cols);
    if (name == "dct") return generate_dictionary(Family::dct, rows, cols);
    if (name == "wht") return generate_dictionary(Family::wht, rows, cols);
    if (name == "bdft") return generate_dictionary(Family::bdft, rows, cols);
    throw ParameterError("unknown dictionary spec '" + std::string(name) + "'");
}

}  // namespace

Size2 parse_size(std::string_view text) {
    const auto x = text.find('x');
    if (x == std::string_view::npos) {
        const std::size_t n = parse_count(text, "size");
        return {n, n};
    }
    return {parse_count(text.substr(0, x), "width"), parse_count(text.substr(x + 1), "height")};
}

Dictionary make_dictionary(std::string_view spec, std::size_t rows, std::size_t cols) {
    if (spec.starts_with("file:")) {
        Dictionary d = load_dictionary(std::string(spec.substr(5)));
        if (d.rows() != rows || d.cols() != cols) {
            throw ShapeError("dictionary file holds " + std::to_string(d.rows()) + "x" + std::to_string(d.cols()) +
                             " atoms, the extrapolation area is " + std::to_string(rows) + "x" +
                             std::to_string(cols));
        }
        return d;
    }
    if (spec.starts_with("union:")) {
        std::vector<Dictionary> parts;
        std::string_view rest = spec.substr(6);
        while (true) {
            const auto plus = rest.find('+');
            parts.push_back(generated(rest.substr(0, plus), rows, cols));
            if (plus == std::string_view::npos) break;
            rest = rest.substr(plus + 1);
        }
        return union_dictionaries(parts);
    }
    return generated(spec, rows, cols);
}

Dictionary truncate_dictionary(const Dictionary& dict, std::size_t count) {
    if (count == 0 || count > dict.size()) {
        throw ParameterError("cannot take " + std::to_string(count) + " atoms from a dictionary of " +
                             std::to_string(dict.size()));
    }
    if (count == dict.size()) return dict;
    const std::size_t n = count * dict.samples();
    std::vector<Family> families(count);
    std::vector<std::optional<FreqTag>> tags(count);
    for (std::size_t k = 0; k < count; ++k) {
        families[k] = dict.family(k);
        tags[k] = dict.freq_tag(k);
    }
    return Dictionary(dict.rows(), dict.cols(), {dict.all_re().begin(), dict.all_re().begin() + n},
                      {dict.all_im().begin(), dict.all_im().begin() + n}, std::move(families), std::move(tags));
}

GramTable make_tables(const Dictionary& dict, const WeightField& weight, bool fft) {
    if (fft && dict.tagged_count() == dict.size()) return fft_gram_table(weight, dict);
    return build_gram_tables(dict, weight);
}

std::vector<bool> lost_pixels(const GrayImage& mask) {
    std::vector<bool> lost(mask.pixels.size());
    for (std::size_t i = 0; i < lost.size(); ++i) lost[i] = mask.pixels[i] == 0;
    return lost;
}

GrayImage loss_mask(Size2 image, Size2 block, std::size_t period, std::optional<double> fraction,
                    std::uint64_t seed) {
    if (image.width == 0 || image.height == 0 || block.width == 0 || block.height == 0) {
        throw ParameterError("image and block sizes must be positive");
    }
    if (period == 0) throw ParameterError("loss period must be positive");
    if (fraction && !(*fraction >= 0.0 && *fraction <= 1.0)) throw ParameterError("loss fraction must lie in [0, 1]");
    GrayImage m{image.width, image.height, std::vector<std::uint8_t>(image.width * image.height, 255)};
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(fraction.value_or(0.0));
    const std::size_t phase = period / 2;
    for (std::size_t tr = 0; tr * block.height < image.height; ++tr) {
        for (std::size_t tc = 0; tc * block.width < image.width; ++tc) {
            const bool interior = tr > 0 && tc > 0 && (tr + 1) * block.height < image.height &&
                                  (tc + 1) * block.width < image.width;
            const bool lost = fraction ? coin(rng) : (interior && tr % period == phase && tc % period == phase);
            if (!lost) continue;
            for (std::size_t r = tr * block.height; r < std::min(image.height, (tr + 1) * block.height); ++r) {
                for (std::size_t c = tc * block.width; c < std::min(image.width, (tc + 1) * block.width); ++c) {
                    m.at(r, c) = 0;
                }
            }
        }
    }
    return m;
}

void set_single_thread(bool single) {
    static const int default_threads = omp_get_max_threads();
    omp_set_num_threads(single ? 1 : default_threads);
}

}  // namespace fase::app
