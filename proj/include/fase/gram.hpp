#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "fase/dictionary.hpp"
#include "fase/grid.hpp"

namespace fase {

/// Identity of the (dictionary, weight field) pair a Gram table belongs to.
std::uint64_t provenance_hash(const Dictionary& dict, const WeightField& weight) noexcept;

/// Tabulated weighted atom-pair scalar products
///     C(k,l) = sum conj(phi_k) * w * phi_l
/// and inverse root energies D_k = 1/sqrt(C(k,k)), with D_k = 0 marking a
/// degenerate atom. C is stored densely, row-major.
class GramTable {
public:
    GramTable(std::size_t size, std::vector<Complex> c, std::vector<double> d, std::uint64_t provenance);

    std::size_t size() const noexcept { return size_; }
    std::uint64_t provenance() const noexcept { return provenance_; }

    const Complex& c(std::size_t k, std::size_t l) const noexcept { return c_[k * size_ + l]; }
    double d(std::size_t k) const noexcept { return d_[k]; }
    std::span<const Complex> row(std::size_t k) const noexcept { return {c_.data() + k * size_, size_}; }
    std::span<const Complex> c_values() const noexcept { return c_; }
    std::span<const double> d_values() const noexcept { return d_; }

    friend bool operator==(const GramTable&, const GramTable&) = default;

private:
    std::size_t size_;
    std::vector<Complex> c_;
    std::vector<double> d_;
    std::uint64_t provenance_;
};

/// D from the diagonal of C, applying the relative degeneracy threshold.
std::vector<double> inverse_root_energies(std::span<const Complex> c, std::size_t size);

/// Evaluates the upper triangle l >= k explicitly and mirrors conjugates.
GramTable build_gram_tables(const Dictionary& dict, const WeightField& weight);

// FGRM v1: 8-byte magic "FGRM v1\n", u64 |D|, u64 provenance hash, |D|^2
// complex entries as (re, im) f64 pairs row-major, then |D| f64 values of D.
// All integers and floats little-endian.
void write_gram_table(std::ostream& out, const GramTable& table);
void save_gram_table(const std::filesystem::path& path, const GramTable& table);
GramTable read_gram_table(std::istream& in);
GramTable load_gram_table(const std::filesystem::path& path);

}  // namespace fase
