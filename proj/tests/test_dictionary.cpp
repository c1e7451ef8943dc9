#include <doctest.h>

#include <sstream>
#include <vector>

#include "fase/dictionary.hpp"
#include "fase/errors.hpp"
#include "oracles.hpp"

using namespace fase;

namespace {

std::vector<oracle::C> unweighted_gram(const Dictionary& d) {
    return oracle::gram(d, std::vector<double>(d.samples(), 1.0));
}

}  // namespace

TEST_CASE("dft atoms match direct evaluation") {
    for (auto [M, N] : {std::pair<std::size_t, std::size_t>{4, 4}, {3, 5}, {8, 6}}) {
        const Dictionary d = generate_dictionary(Family::dft, M, N);
        REQUIRE(d.size() == M * N);
        for (std::size_t k = 0; k < d.size(); ++k) {
            const FreqTag tag = d.freq_tag(k).value();
            CHECK(tag.mu * N + tag.eta == k);
            for (std::size_t m = 0; m < M; ++m) {
                for (std::size_t n = 0; n < N; ++n) {
                    const Complex ref = oracle::dft_atom(tag.mu, tag.eta, m, n, M, N);
                    CHECK(std::abs(d.value(k, m * N + n) - ref) < 1e-14);
                }
            }
        }
        for (std::size_t i = 0; i < d.samples(); ++i) CHECK(d.value(0, i) == Complex(1.0, 0.0));
    }
}

TEST_CASE("dft atoms are orthogonal on the full grid") {
    const Dictionary d = generate_dictionary(Family::dft, 4, 4);
    const auto g = unweighted_gram(d);
    for (std::size_t k = 0; k < 16; ++k) {
        for (std::size_t l = 0; l < 16; ++l) {
            CHECK(std::abs(g[k * 16 + l] - (k == l ? 16.0 : 0.0)) < 1e-12);
        }
    }
}

TEST_CASE("dct atoms are orthonormal and match the separable cosine") {
    const Dictionary d = generate_dictionary(Family::dct, 8, 8);
    CHECK(d.is_real());
    const auto g = unweighted_gram(d);
    for (std::size_t k = 0; k < 64; ++k) {
        for (std::size_t l = 0; l < 64; ++l) CHECK(std::abs(g[k * 64 + l] - (k == l ? 1.0 : 0.0)) < 1e-12);
        const std::size_t u = k / 8, v = k % 8;
        for (std::size_t m = 0; m < 8; ++m) {
            for (std::size_t n = 0; n < 8; ++n) {
                CHECK(d.value(k, m * 8 + n).real() ==
                      doctest::Approx(oracle::dct_1d(u, m, 8) * oracle::dct_1d(v, n, 8)));
            }
        }
    }
}

TEST_CASE("wht atoms are the natural-order Hadamard products") {
    const Dictionary d = generate_dictionary(Family::wht, 4, 8);
    const auto hm = oracle::hadamard(4);
    const auto hn = oracle::hadamard(8);
    for (std::size_t k = 0; k < d.size(); ++k) {
        const std::size_t u = k / 8, v = k % 8;
        for (std::size_t m = 0; m < 4; ++m) {
            for (std::size_t n = 0; n < 8; ++n) {
                CHECK(d.value(k, m * 8 + n) == Complex(hm[u][m] * hn[v][n], 0.0));
            }
        }
    }
    CHECK_THROWS_AS(generate_dictionary(Family::wht, 6, 8), ParameterError);
}

TEST_CASE("bdft atoms are sign-quantised dft atoms") {
    for (auto [M, N] : {std::pair<std::size_t, std::size_t>{4, 4}, {8, 8}, {6, 3}}) {
        const Dictionary d = generate_dictionary(Family::bdft, M, N);
        CHECK(d.tagged_count() == 0);
        for (std::size_t k = 0; k < d.size(); ++k) {
            bool nonzero = false;
            for (std::size_t i = 0; i < d.samples(); ++i) {
                const Complex z = d.value(k, i);
                for (double part : {z.real(), z.imag()}) {
                    CHECK((part == -1.0 || part == 0.0 || part == 1.0));
                    nonzero = nonzero || part != 0.0;
                }
                const Complex ref =
                    oracle::dft_atom(k / N, k % N, i / N, i % N, M, N);
                const auto sgn = [](double x) { return std::abs(x) < 1e-9 ? 0.0 : (x > 0 ? 1.0 : -1.0); };
                CHECK(z.real() == sgn(ref.real()));
                CHECK(z.imag() == sgn(ref.imag()));
            }
            CHECK(nonzero);
        }
    }
}

TEST_CASE("union concatenates parts in order") {
    const Dictionary dct = generate_dictionary(Family::dct, 8, 8);
    const Dictionary wht = generate_dictionary(Family::wht, 8, 8);
    const std::vector<Dictionary> parts{dct, wht};
    const Dictionary u = union_dictionaries(parts);
    CHECK(u.size() == 128);
    CHECK(u.rows() == 8);
    CHECK(u.family(0) == Family::dct);
    CHECK(u.family(64) == Family::wht);
    for (std::size_t i = 0; i < 64; ++i) CHECK(u.value(70, i) == wht.value(6, i));

    const std::vector<Dictionary> single{dct};
    CHECK(union_dictionaries(single).hash() == dct.hash());

    const std::vector<Dictionary> mixed{generate_dictionary(Family::dft, 4, 4),
                                        generate_dictionary(Family::bdft, 4, 4)};
    const Dictionary m = union_dictionaries(mixed);
    CHECK(m.size() == 32);
    CHECK(m.tagged_count() == 16);
    for (std::size_t k = 0; k < 32; ++k) CHECK(m.freq_tag(k).has_value() == (k < 16));
}

TEST_CASE("union is associative in atom order") {
    const Dictionary a = generate_dictionary(Family::dct, 4, 4);
    const Dictionary b = generate_dictionary(Family::wht, 4, 4);
    const Dictionary c = generate_dictionary(Family::dft, 4, 4);
    const std::vector<Dictionary> ab{a, b};
    const std::vector<Dictionary> bc{b, c};
    const std::vector<Dictionary> left{union_dictionaries(ab), c};
    const std::vector<Dictionary> right{a, union_dictionaries(bc)};
    CHECK(union_dictionaries(left).hash() == union_dictionaries(right).hash());
}

TEST_CASE("union rejects empty and mismatched parts") {
    CHECK_THROWS_AS(union_dictionaries(std::vector<Dictionary>{}), ParameterError);
    const std::vector<Dictionary> bad{generate_dictionary(Family::dct, 4, 4),
                                      generate_dictionary(Family::dct, 4, 8)};
    CHECK_THROWS_AS(union_dictionaries(bad), ShapeError);
}

TEST_CASE("dictionary file round trip is exact") {
    for (Family f : {Family::dct, Family::dft, Family::bdft}) {
        const Dictionary d = generate_dictionary(f, 8, 8);
        std::stringstream io;
        write_dictionary(io, d);
        const Dictionary back = read_dictionary(io);
        CHECK(back.size() == d.size());
        CHECK(back.hash() == d.hash());
        CHECK(back.family(0) == Family::custom);
        CHECK(back.tagged_count() == 0);
        for (std::size_t k = 0; k < d.size(); ++k) {
            for (std::size_t i = 0; i < d.samples(); ++i) CHECK(back.value(k, i) == d.value(k, i));
        }
    }
}

TEST_CASE("dictionary file with two complex 2x2 atoms") {
    std::stringstream io;
    io << "FDIC v1 2 2 2 complex\n";
    const double vals[16] = {1, 0, 0, 1, -1, 0, 0, -1, 2, 2, 2, 2, 2, 2, 2, 2};
    io.write(reinterpret_cast<const char*>(vals), sizeof vals);
    const Dictionary d = read_dictionary(io);
    CHECK(d.size() == 2);
    CHECK(d.value(0, 1) == Complex(0, 1));
    CHECK(d.value(1, 3) == Complex(2, 2));
}

TEST_CASE("dictionary file errors") {
    SUBCASE("bad header") {
        std::stringstream io("FDIX v1 2 2 1 real\n");
        CHECK_THROWS_AS(read_dictionary(io), FormatError);
    }
    SUBCASE("truncated payload") {
        std::stringstream io;
        io << "FDIC v1 2 2 2 real\n";
        const double vals[6] = {1, 1, 1, 1, 1, 1};
        io.write(reinterpret_cast<const char*>(vals), sizeof vals);
        CHECK_THROWS_WITH_AS(read_dictionary(io), doctest::Contains("atom 1"), FormatError);
    }
    SUBCASE("zero atom") {
        std::stringstream io;
        io << "FDIC v1 1 2 2 real\n";
        const double vals[4] = {1, 2, 0, 0};
        io.write(reinterpret_cast<const char*>(vals), sizeof vals);
        CHECK_THROWS_WITH_AS(read_dictionary(io), doctest::Contains("atom 1"), FormatError);
    }
}
