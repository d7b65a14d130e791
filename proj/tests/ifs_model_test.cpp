#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace fifcover;
using namespace fifcover::testing;

namespace {

ErrorCode code_of(const InterpolationData& data) {
    try {
        validate_data(data);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected validation failure";
    return ErrorCode::MalformedDocument;
}

} // namespace

TEST(ValidateData, AcceptsFramework1Unchanged) {
    const InterpolationData data = framework1();
    EXPECT_EQ(validate_data(data), data);
}

TEST(ValidateData, RejectsBadInputs) {
    EXPECT_EQ(code_of({{0, 1, 1, 2}, {0, 0, 0, 0}, {0.1, 0.1, 0.1}}), ErrorCode::NonIncreasingAbscissas);
    EXPECT_EQ(code_of({{0, 1, 1, 2}, {0}, {}}), ErrorCode::NonIncreasingAbscissas);
    EXPECT_EQ(code_of({{0, 2, 1}, {0, 0, 0}, {0.1, 0.1}}), ErrorCode::NonIncreasingAbscissas);
    EXPECT_EQ(code_of({{0, 1}, {0, 0}, {0.5}}), ErrorCode::TooFewPoints);
    EXPECT_EQ(code_of({{0, 1, 2}, {0, 0, 0}, {0.5}}), ErrorCode::LengthMismatch);
    EXPECT_EQ(code_of({{0, 1, 2}, {0, 0}, {0.5, 0.5}}), ErrorCode::LengthMismatch);
    EXPECT_EQ(code_of({{0, 1, 2}, {0, 0, 0}, {0.5, 1.0}}), ErrorCode::ScalingOutOfRange);
    EXPECT_EQ(code_of({{0, 1, 2}, {0, 0, 0}, {-0.1, 0.5}}), ErrorCode::ScalingOutOfRange);
    EXPECT_EQ(code_of({{0, 1, 2}, {0, NAN, 0}, {0.1, 0.5}}), ErrorCode::NonFiniteValue);
    EXPECT_EQ(code_of({{0, 1, INFINITY}, {0, 0, 0}, {0.1, 0.5}}), ErrorCode::NonFiniteValue);
}

TEST(ValidateData, AcceptsAllZeroScaling) {
    EXPECT_NO_THROW(validate_data({{0, 1, 2}, {0, 1, 0}, {0.0, 0.0}}));
}

TEST(BuildSystem, Framework1Coefficients) {
    const FifSystem sys = build_system(framework1());
    ASSERT_EQ(sys.map_count(), 4u);
    const double c[] = {-0.325, 0.425, -0.325, 0.175};
    const double e[] = {2.1, 1.1, 3.1, 2.1};
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_DOUBLE_EQ(sys.maps[k].a, 0.25);
        EXPECT_NEAR(sys.maps[k].c, c[k], 1e-15);
        EXPECT_NEAR(sys.maps[k].e, e[k], 1e-15);
        EXPECT_DOUBLE_EQ(sys.maps[k].d, 0.3);
    }
    EXPECT_NEAR(sys.theta, 15.0 / 17.0, 1e-15);
}

TEST(BuildSystem, Framework3Coefficients) {
    const FifSystem sys = build_system(framework3());
    const double a[] = {0.3, 0.3, 0.4};
    const double c[] = {0.55, -0.05, -0.477};
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_NEAR(sys.maps[k].a, a[k], 1e-15);
        EXPECT_NEAR(sys.maps[k].c, c[k], 1e-15);
    }
    EXPECT_NEAR(sys.theta, 6.0 / 11.0, 1e-15);
}

TEST(BuildSystem, ConstantDataHasNoShear) {
    const FifSystem sys = build_system({{-1, 0.5, 3}, {5, 5, 5}, {0.2, 0.7}});
    EXPECT_EQ(sys.theta, 1.0);
    for (const AffineMap& f : sys.maps) {
        EXPECT_EQ(f.c, 0.0);
        EXPECT_NEAR(f.e, 5.0 * (1.0 - f.d), 1e-14);
    }
}

TEST(ApplyMap, IdentityAndEndpoints) {
    EXPECT_EQ(apply_map({1, 0, 0, 1, 0}, {2, 3}), (Point{2, 3}));
    const FifSystem sys = build_system(framework1());
    const Point p = apply_map(sys.maps[0], {0, 3});
    EXPECT_NEAR(p.x, 0.0, 1e-15);
    EXPECT_NEAR(p.y, 3.0, 1e-15);
    const Point q = apply_map(sys.maps[1], {4, 4});
    EXPECT_NEAR(q.x, 2.0, 1e-15);
    EXPECT_NEAR(q.y, 4.0, 1e-15);
}

// Endpoint conditions, tiling of [x_0, x_n], and theta > 0 on random data.
TEST(BuildSystem, RandomDataProperties) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> gap(0.01, 10.0);
    std::uniform_real_distribution<double> val(-100.0, 100.0);
    std::uniform_real_distribution<double> scale(0.0, 0.999);
    std::uniform_int_distribution<int> size(2, 12);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = size(rng);
        InterpolationData data;
        double x = val(rng);
        for (int k = 0; k <= n; ++k) {
            data.xs.push_back(x);
            data.ys.push_back(val(rng));
            x += gap(rng);
        }
        for (int k = 0; k < n; ++k) data.ds.push_back(scale(rng));
        const FifSystem sys = build_system(validate_data(data));
        EXPECT_GT(sys.theta, 0.0);
        double sum_a = 0.0;
        for (int k = 1; k <= n; ++k) {
            const AffineMap& f = sys.maps[k - 1];
            sum_a += f.a;
            const Point left = apply_map(f, data.first_point());
            const Point right = apply_map(f, data.last_point());
            EXPECT_LE(rel_err(left.x, data.xs[k - 1]), 1e-12);
            EXPECT_LE(rel_err(left.y, data.ys[k - 1]), 1e-12);
            EXPECT_LE(rel_err(right.x, data.xs[k]), 1e-12);
            EXPECT_LE(rel_err(right.y, data.ys[k]), 1e-12);
            EXPECT_LT(lipschitz_constant(f, sys.theta), 1.0);
        }
        EXPECT_NEAR(sum_a, 1.0, 1e-12);
        const FifSystem again = build_system(data);
        for (std::size_t k = 0; k < sys.maps.size(); ++k) EXPECT_EQ(again.maps[k], sys.maps[k]);
        EXPECT_EQ(again.theta, sys.theta);
    }
}
