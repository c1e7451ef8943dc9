#include <doctest.h>

#include <sstream>
#include <vector>

#include "fase/errors.hpp"
#include "fase/fase.hpp"
#include "fase/gram.hpp"
#include "fase/se.hpp"
#include "oracles.hpp"

using namespace fase;

namespace {

Field2D atom_field(const Dictionary& d, std::size_t k) {
    std::vector<Complex> v(d.samples());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = d.value(k, i);
    return Field2D(d.rows(), d.cols(), std::move(v));
}

void check_invariants(const GramTable& t) {
    for (std::size_t k = 0; k < t.size(); ++k) {
        CHECK(t.c(k, k).imag() == 0.0);
        CHECK(t.c(k, k).real() >= 0.0);
        if (t.d(k) != 0.0) CHECK(std::abs(t.d(k) * t.d(k) * t.c(k, k).real() - 1.0) <= 1e-12);
        for (std::size_t l = 0; l < t.size(); ++l) CHECK(t.c(l, k) == std::conj(t.c(k, l)));
    }
}

}  // namespace

TEST_CASE("gram table of an unmasked dft dictionary is diagonal") {
    const Dictionary d = generate_dictionary(Family::dft, 4, 4);
    const GramTable t = build_gram_tables(d, WeightField(4, 4, std::vector<double>(16, 1.0)));
    for (std::size_t k = 0; k < 16; ++k) {
        CHECK(t.d(k) == doctest::Approx(0.25));
        for (std::size_t l = 0; l < 16; ++l) CHECK(std::abs(t.c(k, l) - (k == l ? 16.0 : 0.0)) < 1e-12);
    }
    check_invariants(t);
}

TEST_CASE("gram table matches the all-pairs oracle") {
    struct Case {
        Family family;
        std::size_t M, N, h, w;
        double rho;
    };
    for (const Case c : {Case{Family::dct, 8, 8, 4, 4, 0.8}, Case{Family::dft, 6, 10, 2, 4, 0.7},
                         Case{Family::bdft, 8, 8, 4, 4, 0.9}, Case{Family::wht, 4, 16, 2, 8, 1.0}}) {
        const Dictionary d = generate_dictionary(c.family, c.M, c.N);
        const auto lost = oracle::central_lost(c.M, c.N, c.h, c.w);
        const GramTable t = build_gram_tables(d, build_weight_field(LossMask(c.M, c.N, lost), c.rho));
        const auto ref = oracle::gram(d, oracle::weight(lost, c.M, c.N, c.rho));
        const double scale = oracle::max_abs(ref);
        for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(t.c_values()[i] - ref[i]) <= 1e-12 * scale);
        check_invariants(t);
    }
}

TEST_CASE("gram table of an odd-sized union dictionary") {
    const std::vector<Dictionary> parts{generate_dictionary(Family::dct, 5, 7),
                                        generate_dictionary(Family::dft, 5, 7),
                                        generate_dictionary(Family::bdft, 5, 7)};
    const Dictionary d = union_dictionaries(parts);
    const auto lost = oracle::central_lost(5, 7, 1, 3);
    const GramTable t = build_gram_tables(d, build_weight_field(LossMask(5, 7, lost), 0.75));
    const auto ref = oracle::gram(d, oracle::weight(lost, 5, 7, 0.75));
    const double scale = oracle::max_abs(ref);
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(t.c_values()[i] - ref[i]) <= 1e-12 * scale);
    check_invariants(t);
}

TEST_CASE("degenerate atoms get a zero D") {
    const LossMask mask = LossMask::block(2, 2, 0, 0, 1, 1);
    const Dictionary d({Atom{Field2D::from_real(2, 2, std::vector<double>{1, 1, 0, 1}), Family::custom, {}},
                        Atom{Field2D::from_real(2, 2, std::vector<double>{1, 0, 0, 0}), Family::custom, {}}});
    const GramTable t = build_gram_tables(d, build_weight_field(mask, 0.8));
    CHECK(t.d(0) > 0.0);
    CHECK(t.d(1) == 0.0);
    check_invariants(t);
}

TEST_CASE("gram table file round trip") {
    const Dictionary d = generate_dictionary(Family::dft, 4, 4);
    const GramTable t = build_gram_tables(d, build_weight_field(LossMask::central_block(4, 4, 2, 2), 0.8));
    std::stringstream io;
    write_gram_table(io, t);
    const std::string bytes = io.str();
    CHECK(bytes.size() == 8 + 16 + 16 * 16 * 16 + 16 * 8);
    CHECK(bytes.substr(0, 8) == "FGRM v1\n");
    CHECK(read_gram_table(io) == t);

    std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
    CHECK_THROWS_AS(read_gram_table(truncated), FormatError);
    std::stringstream bad("FGRX v1\n" + bytes.substr(8));
    CHECK_THROWS_AS(read_gram_table(bad), FormatError);
    std::stringstream trailing(bytes + "x");
    CHECK_THROWS_AS(read_gram_table(trailing), FormatError);
}

TEST_CASE("initial products") {
    const Dictionary d = generate_dictionary(Family::dct, 6, 6);
    const WeightField w = build_weight_field(LossMask::central_block(6, 6, 2, 2), 0.8);
    SUBCASE("zero signal") {
        const ResidualProducts r = initial_scalar_products(Field2D(6, 6), w, d);
        CHECK(r.nu == 0);
        for (const Complex& x : r.values) CHECK(x == Complex(0, 0));
    }
    SUBCASE("an atom reproduces its gram column") {
        const GramTable t = build_gram_tables(d, w);
        for (std::size_t j : {0u, 7u, 35u}) {
            const ResidualProducts r = initial_scalar_products(atom_field(d, j), w, d);
            for (std::size_t k = 0; k < d.size(); ++k) CHECK(std::abs(r.values[k] - t.c(k, j)) < 1e-13);
        }
    }
    SUBCASE("a delta against dft atoms") {
        const Dictionary f = generate_dictionary(Family::dft, 4, 4);
        std::vector<double> s(16, 0.0);
        s[0] = 1.0;
        const ResidualProducts r =
            initial_scalar_products(Field2D::from_real(4, 4, s), WeightField(4, 4, std::vector<double>(16, 1.0)), f);
        for (const Complex& x : r.values) CHECK(x == Complex(1.0, 0.0));
    }
}

TEST_CASE("fast extrapolation recovers one atom in one step") {
    const Dictionary d = generate_dictionary(Family::dct, 8, 8);
    const LossMask mask = LossMask::none(8, 8);
    const ExtrapConfig cfg{1, 1.0, 0.8};
    const GramTable t = build_gram_tables(d, build_weight_field(mask, cfg.rho_hat));
    const auto run = fase_extrapolate(atom_field(d, 5), mask, d, t, cfg);
    REQUIRE(run.model.terms.size() == 1);
    CHECK(run.model.terms[0].atom == 5);
    CHECK(std::abs(run.model.terms[0].coefficient - 1.0) < 1e-12);
    for (const Complex& r : run.products.values) CHECK(std::abs(r) < 1e-12);
    CHECK(run.products.nu == 1);
}

TEST_CASE("fast extrapolation of a zero signal") {
    const Dictionary d = generate_dictionary(Family::dft, 4, 4);
    const LossMask mask = LossMask::central_block(4, 4, 2, 2);
    const ExtrapConfig cfg{5, 0.5, 0.8};
    const auto run = fase_extrapolate(Field2D(4, 4), mask, d, build_gram_tables(d, build_weight_field(mask, 0.8)), cfg);
    REQUIRE(run.model.terms.size() == 5);
    for (const auto& term : run.model.terms) {
        CHECK(term.atom == 0);
        CHECK(term.coefficient == Complex(0, 0));
    }
}

TEST_CASE("fast extrapolation follows the reference run") {
    const Dictionary d = generate_dictionary(Family::dct, 8, 8);
    const LossMask mask = LossMask::central_block(8, 8, 4, 4);
    const ExtrapConfig cfg{50, 0.5, 0.8};
    const GramTable t = build_gram_tables(d, build_weight_field(mask, cfg.rho_hat));
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Field2D s = oracle::random_real(8, 8, seed);
        const auto ref = se_extrapolate(s, mask, d, cfg);
        const auto run = fase_extrapolate(s, mask, d, t, cfg);
        REQUIRE(run.trace.size() == ref.trace.size());
        double scale = 0.0;
        for (const auto& r : ref.trace) scale = std::max(scale, std::abs(r.coefficient));
        for (std::size_t i = 0; i < ref.trace.size(); ++i) {
            CHECK(run.trace[i].atom == ref.trace[i].atom);
            CHECK(std::abs(run.trace[i].coefficient - ref.trace[i].coefficient) <= 1e-9 * scale);
        }
        // Accumulated model fields agree as well.
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(std::abs(run.model_field[i] - ref.model_field[i]) <= 1e-9 * 255.0);
        }
    }
}

TEST_CASE("stale tables are rejected") {
    const Dictionary d = generate_dictionary(Family::dct, 8, 8);
    const LossMask mask = LossMask::central_block(8, 8, 4, 4);
    const GramTable t = build_gram_tables(d, build_weight_field(mask, 0.8));
    const Field2D s = oracle::random_real(8, 8, 1);
    CHECK_THROWS_AS(fase_extrapolate(s, mask, d, t, ExtrapConfig{10, 0.5, 0.7}), StaleTableError);
    CHECK_THROWS_AS(fase_extrapolate(s, LossMask::central_block(8, 8, 2, 2), d, t, ExtrapConfig{10, 0.5, 0.8}),
                    StaleTableError);
    CHECK_THROWS_AS(fase_extrapolate(s, mask, generate_dictionary(Family::wht, 8, 8), t, ExtrapConfig{10, 0.5, 0.8}),
                    StaleTableError);
    CHECK_NOTHROW(fase_extrapolate(s, mask, d, t, ExtrapConfig{10, 0.5, 0.8}));
}

TEST_CASE("fast extrapolation with no selectable atom") {
    const LossMask mask = LossMask::block(2, 2, 0, 0, 1, 1);
    const Dictionary d({Atom{Field2D::from_real(2, 2, std::vector<double>{1, 0, 0, 0}), Family::custom, {}}});
    const GramTable t = build_gram_tables(d, build_weight_field(mask, 0.8));
    CHECK_THROWS_AS(fase_extrapolate(Field2D(2, 2), mask, d, t, ExtrapConfig{3, 0.5, 0.8}), NoSelectableAtomError);
}

TEST_CASE("applying a model") {
    const Dictionary d = generate_dictionary(Family::dct, 8, 8);
    const LossMask mask = LossMask::central_block(8, 8, 4, 4);
    const Field2D s = oracle::random_real(8, 8, 4);

    SUBCASE("empty model leaves the signal untouched") {
        const AppliedModel a = apply_model(s, SparseModel{8, 8, d.hash(), {}}, mask, d);
        CHECK(a.output == s);
        CHECK(a.max_imag == 0.0);
    }
    SUBCASE("real model substitutes the loss area only") {
        const auto run = se_extrapolate(s, mask, d, ExtrapConfig{20, 0.5, 0.8});
        const AppliedModel a = apply_model(s, run.model, mask, d);
        CHECK(a.max_imag <= 1e-12);
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (mask.lost(i)) {
                CHECK(std::abs(a.output[i] - run.model_field[i].real()) < 1e-9);
            } else {
                CHECK(a.output[i] == s[i]);
            }
        }
    }
    SUBCASE("conjugate dft terms give a real model") {
        const Dictionary f = generate_dictionary(Family::dft, 8, 8);
        const std::size_t k = 1 * 8 + 3;
        const std::size_t kc = 7 * 8 + 5;
        const Complex c(0.7, -1.3);
        const SparseModel m{8, 8, f.hash(), {{k, c}, {kc, std::conj(c)}}};
        const AppliedModel a = apply_model(s, m, mask, f);
        CHECK(a.max_imag <= 1e-12);
        const SparseModel lone{8, 8, f.hash(), {{k, c}}};
        CHECK(apply_model(s, lone, mask, f).max_imag > 0.1);
    }
    SUBCASE("model bound to another dictionary") {
        const SparseModel m{8, 8, d.hash(), {{0, Complex(1, 0)}}};
        CHECK_THROWS_AS(apply_model(s, m, mask, generate_dictionary(Family::wht, 8, 8)), ShapeError);
        CHECK_THROWS_AS(apply_model(Field2D(4, 4), m, mask, d), ShapeError);
    }
}
