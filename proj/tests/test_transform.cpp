#include <doctest.h>

#include <vector>

#include "fase/errors.hpp"
#include "fase/gram.hpp"
#include "fase/transform.hpp"
#include "oracles.hpp"

using namespace fase;

TEST_CASE("dft2 matches the direct transform") {
    const Field2D x = oracle::random_real(6, 10, 2, -1.0, 1.0);
    const Field2D X = dft2(x);
    const auto ref = oracle::dft2(oracle::grid(x), 6, 10);
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(X[i] - ref[i]) < 1e-12);
}

TEST_CASE("fft products with a trivial weight are the plain dft") {
    const Dictionary d = generate_dictionary(Family::dft, 8, 8);
    const Field2D s = oracle::random_real(8, 8, 3);
    const ResidualProducts r = fft_initial_products(s, WeightField(8, 8, std::vector<double>(64, 1.0)), d);
    const auto ref = oracle::dft2(oracle::grid(s), 8, 8);
    const double scale = oracle::max_abs(ref);
    for (std::size_t k = 0; k < 64; ++k) CHECK(std::abs(r.values[k] - ref[k]) <= 1e-12 * scale);
}

TEST_CASE("fft products of a delta are all one") {
    const Dictionary d = generate_dictionary(Family::dft, 4, 4);
    std::vector<double> s(16, 0.0);
    s[0] = 1.0;
    const ResidualProducts r =
        fft_initial_products(Field2D::from_real(4, 4, s), WeightField(4, 4, std::vector<double>(16, 1.0)), d);
    for (const Complex& x : r.values) CHECK(std::abs(x - 1.0) < 1e-15);
}

TEST_CASE("fft products agree with direct summation") {
    for (std::size_t n : {8u, 16u, 32u}) {
        const Dictionary d = generate_dictionary(Family::dft, n, n);
        const WeightField w = build_weight_field(LossMask::central_block(n, n, n / 4, n / 4), 0.8);
        const Field2D s = oracle::random_real(n, n, n);
        const ResidualProducts fast = fft_initial_products(s, w, d);
        const ResidualProducts direct = initial_scalar_products(s, w, d);
        const double scale = oracle::max_abs(direct.values);
        for (std::size_t k = 0; k < d.size(); ++k) CHECK(std::abs(fast.values[k] - direct.values[k]) <= 1e-9 * scale);
    }
}

TEST_CASE("untagged atoms fall back to direct summation") {
    const std::vector<Dictionary> parts{generate_dictionary(Family::dft, 8, 8),
                                        generate_dictionary(Family::bdft, 8, 8)};
    const Dictionary d = union_dictionaries(parts);
    const WeightField w = build_weight_field(LossMask::central_block(8, 8, 4, 4), 0.8);
    const Field2D s = oracle::random_real(8, 8, 12);
    const ResidualProducts fast = fft_initial_products(s, w, d);
    const ResidualProducts direct = initial_scalar_products(s, w, d);
    const double scale = oracle::max_abs(direct.values);
    for (std::size_t k = 0; k < d.size(); ++k) CHECK(std::abs(fast.values[k] - direct.values[k]) <= 1e-12 * scale);
    CHECK_THROWS_AS(fft_initial_products(s, w, generate_dictionary(Family::dct, 8, 8)), UnsupportedDictionaryError);
}

TEST_CASE("fft gram table with a trivial weight") {
    const Dictionary d = generate_dictionary(Family::dft, 4, 8);
    const GramTable t = fft_gram_table(WeightField(4, 8, std::vector<double>(32, 1.0)), d);
    for (std::size_t k = 0; k < 32; ++k) {
        for (std::size_t l = 0; l < 32; ++l) CHECK(std::abs(t.c(k, l) - (k == l ? 32.0 : 0.0)) < 1e-12);
    }
}

TEST_CASE("fft gram table matches the direct oracle") {
    const std::size_t M = 8, N = 8;
    const auto lost = oracle::central_lost(M, N, 4, 4);
    const WeightField w = build_weight_field(LossMask(M, N, lost), 0.8);
    const Dictionary d = generate_dictionary(Family::dft, M, N);
    const GramTable t = fft_gram_table(w, d);
    const auto ref = oracle::gram(d, oracle::weight(lost, M, N, 0.8));
    const double scale = oracle::max_abs(ref);
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(t.c_values()[i] - ref[i]) <= 1e-9 * scale);

    double sum_w = 0.0;
    for (double x : w.values()) sum_w += x;
    for (std::size_t k = 0; k < d.size(); ++k) {
        CHECK(t.c(k, k).imag() == 0.0);
        CHECK(t.c(k, k).real() == doctest::Approx(sum_w).epsilon(1e-12));
        for (std::size_t l = 0; l < d.size(); ++l) CHECK(t.c(l, k) == std::conj(t.c(k, l)));
    }
    CHECK(t.provenance() == build_gram_tables(d, w).provenance());
}

TEST_CASE("fft gram entries depend only on the frequency difference") {
    const std::size_t M = 6, N = 4;
    const WeightField w = build_weight_field(LossMask::central_block(M, N, 2, 2), 0.6);
    const Dictionary d = generate_dictionary(Family::dft, M, N);
    const GramTable t = fft_gram_table(w, d);
    for (std::size_t k = 0; k < d.size(); ++k) {
        for (std::size_t l = 0; l < d.size(); ++l) {
            const FreqTag a = *d.freq_tag(k), b = *d.freq_tag(l);
            const std::size_t shifted_k = ((a.mu + 1) % M) * N + (a.eta + 3) % N;
            const std::size_t shifted_l = ((b.mu + 1) % M) * N + (b.eta + 3) % N;
            CHECK(t.c(k, l) == t.c(shifted_k, shifted_l));
        }
    }
}

TEST_CASE("fft gram table needs a pure dft dictionary") {
    const std::vector<Dictionary> parts{generate_dictionary(Family::dft, 4, 4),
                                        generate_dictionary(Family::bdft, 4, 4)};
    const WeightField w(4, 4, std::vector<double>(16, 1.0));
    CHECK_THROWS_AS(fft_gram_table(w, union_dictionaries(parts)), UnsupportedDictionaryError);
    CHECK_THROWS_AS(fft_gram_table(w, generate_dictionary(Family::dct, 4, 4)), UnsupportedDictionaryError);
}
