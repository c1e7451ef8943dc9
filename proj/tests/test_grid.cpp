#include <doctest.h>

#include <cmath>

#include "fase/errors.hpp"
#include "fase/grid.hpp"
#include "oracles.hpp"

using namespace fase;

TEST_CASE("weight is one at the centre of an odd grid") {
    const WeightField w = build_weight_field(LossMask::none(5, 5), 0.8);
    CHECK(w(2, 2) == 1.0);
}

TEST_CASE("weight vanishes on the loss area and is positive on the support") {
    for (double rho : {0.1, 0.5, 0.8, 1.0}) {
        const LossMask mask = LossMask::central_block(8, 8, 4, 4);
        const WeightField w = build_weight_field(mask, rho);
        for (std::size_t i = 0; i < mask.size(); ++i) {
            if (mask.lost(i)) {
                CHECK(w[i] == 0.0);
            } else {
                CHECK(w[i] > 0.0);
            }
        }
    }
}

TEST_CASE("corner weight of a 3x3 grid") {
    const WeightField w = build_weight_field(LossMask::none(3, 3), 0.5);
    CHECK(w(0, 0) == doctest::Approx(0.375214).epsilon(1e-6));
    CHECK(w(0, 0) == doctest::Approx(std::pow(0.5, std::sqrt(2.0))));
}

TEST_CASE("weight field matches the direct formula on an even grid") {
    const auto lost = oracle::central_lost(16, 12, 4, 6);
    const WeightField w = build_weight_field(LossMask(16, 12, lost), 0.8);
    const auto ref = oracle::weight(lost, 16, 12, 0.8);
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(w[i] == doctest::Approx(ref[i]).epsilon(1e-14));
}

TEST_CASE("weight field rejects bad rho and empty support") {
    const LossMask mask = LossMask::none(4, 4);
    CHECK_THROWS_AS(build_weight_field(mask, 0.0), ParameterError);
    CHECK_THROWS_AS(build_weight_field(mask, 1.5), ParameterError);
    CHECK_THROWS_AS(build_weight_field(mask, std::nan("")), ParameterError);
    CHECK_THROWS_AS(LossMask(2, 2, std::vector<bool>(4, true)), MaskError);
}

TEST_CASE("weight depends only on geometry") {
    const LossMask mask = LossMask::central_block(8, 8, 2, 2);
    CHECK(build_weight_field(mask, 0.7) == build_weight_field(mask, 0.7));
    CHECK(build_weight_field(mask, 0.7).hash() == build_weight_field(mask, 0.7).hash());
    CHECK(build_weight_field(mask, 0.7).hash() != build_weight_field(mask, 0.71).hash());
}

TEST_CASE("psnr over a region") {
    const Field2D a = oracle::random_real(6, 6, 1);
    const LossMask region = LossMask::central_block(6, 6, 2, 2);
    CHECK(psnr_over_region(a, a, region) == kPsnrIdentical);

    Field2D b = a;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (region.lost(i)) b[i] += (i % 2 ? 1.0 : -1.0);
    }
    CHECK(psnr_over_region(a, b, region) == doctest::Approx(20.0 * std::log10(255.0)));
    CHECK(psnr_over_region(a, b, region) == doctest::Approx(48.13).epsilon(1e-4));

    // Differences outside the region are ignored.
    Field2D c = a;
    c[0] += 100.0;
    CHECK(psnr_over_region(a, c, region) == kPsnrIdentical);
}

TEST_CASE("psnr of a single sample off by full scale is zero") {
    const Field2D a = Field2D::from_real(2, 2, std::vector<double>{0, 0, 0, 0});
    const Field2D b = Field2D::from_real(2, 2, std::vector<double>{0, 0, 0, 255});
    const LossMask one = LossMask::block(2, 2, 1, 1, 1, 1);
    CHECK(psnr_over_region(a, b, one) == doctest::Approx(0.0));
}

TEST_CASE("psnr rejects shape mismatch") {
    const LossMask region = LossMask::central_block(4, 4, 2, 2);
    CHECK_THROWS_AS(psnr_over_region(Field2D(4, 4), Field2D(4, 5), region), ShapeError);
    CHECK_THROWS_AS(psnr_over_region(Field2D(4, 4), Field2D(4, 4), LossMask::none(4, 4)), ParameterError);
}

TEST_CASE("config validation") {
    ExtrapConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.iterations = 0;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg = {};
    cfg.gamma = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg = {};
    cfg.gamma = 1.0;
    cfg.rho_hat = 1.0;
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("field shape invariants") {
    CHECK_THROWS_AS(Field2D(0, 3), ShapeError);
    CHECK_THROWS_AS(Field2D(2, 2, std::vector<Complex>(3)), ShapeError);
}
