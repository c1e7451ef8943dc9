#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fase/grid.hpp"

namespace fase {

enum class Family { dft, dct, wht, bdft, custom };

std::string_view to_string(Family f) noexcept;

/// Vertical (mu) and horizontal (eta) frequency of a DFT atom.
struct FreqTag {
    std::size_t mu = 0;
    std::size_t eta = 0;
    friend bool operator==(const FreqTag&, const FreqTag&) = default;
};

struct Atom {
    Field2D values;
    Family family = Family::custom;
    std::optional<FreqTag> freq_tag;
};

/// Ordered, immutable set of M x N atoms. Samples are stored planar
/// (real and imaginary parts in separate atom-major arrays) so the
/// scalar-product kernels can stream them.
class Dictionary {
public:
    explicit Dictionary(std::vector<Atom> atoms);
    Dictionary(std::size_t rows, std::size_t cols, std::vector<double> re, std::vector<double> im,
               std::vector<Family> families, std::vector<std::optional<FreqTag>> tags);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t samples() const noexcept { return rows_ * cols_; }
    std::size_t size() const noexcept { return families_.size(); }

    Atom atom(std::size_t k) const;
    std::span<const double> re(std::size_t k) const noexcept {
        return {re_.data() + k * samples(), samples()};
    }
    std::span<const double> im(std::size_t k) const noexcept {
        return {im_.data() + k * samples(), samples()};
    }
    Complex value(std::size_t k, std::size_t i) const noexcept {
        return {re_[k * samples() + i], im_[k * samples() + i]};
    }
    Family family(std::size_t k) const noexcept { return families_[k]; }
    const std::optional<FreqTag>& freq_tag(std::size_t k) const noexcept { return tags_[k]; }
    std::size_t tagged_count() const noexcept;

    /// True when every atom has an identically zero imaginary part.
    bool is_real() const noexcept { return real_; }
    /// Content hash of shape and atom values (labels and tags excluded).
    std::uint64_t hash() const noexcept { return hash_; }

    bool same_shape(const Field2D& f) const noexcept {
        return rows_ == f.rows() && cols_ == f.cols();
    }

    std::span<const double> all_re() const noexcept { return re_; }
    std::span<const double> all_im() const noexcept { return im_; }

private:
    void validate_and_seal();

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> re_;
    std::vector<double> im_;
    std::vector<Family> families_;
    std::vector<std::optional<FreqTag>> tags_;
    bool real_ = true;
    std::uint64_t hash_ = 0;
};

/// Builds one of the transform families with |D| = M*N atoms, ordered
/// k = mu*N + eta (row frequency major).
///   dft  : e^{j2pi(mu m/M + eta n/N)}, frequency tagged
///   dct  : orthonormal separable type-II cosines
///   wht  : +-1 Walsh-Hadamard atoms in natural order (M, N powers of two)
///   bdft : componentwise sign() of the DFT atoms
Dictionary generate_dictionary(Family kind, std::size_t rows, std::size_t cols);

/// Concatenation in part order. Tags and family labels are kept.
Dictionary union_dictionaries(std::span<const Dictionary> parts);

// FDIC v1: ASCII header line "FDIC v1 M N K complex|real\n" followed by
// little-endian f64 samples, atom-major then row-major. "complex" stores
// (re, im) pairs, "real" stores re only.
void write_dictionary(std::ostream& out, const Dictionary& dict);
void save_dictionary(const std::filesystem::path& path, const Dictionary& dict);
Dictionary read_dictionary(std::istream& in);
Dictionary load_dictionary(const std::filesystem::path& path);

}  // namespace fase
