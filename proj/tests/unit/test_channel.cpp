#include <catch2/catch_amalgamated.hpp>

#include "gmdhp/channel.hpp"

#include <numbers>

using namespace gmdhp;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

bool near(cplx a, cplx b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("ula_response at broadside is flat", "[channel]")
{
    const CVector a = ula_response({4, 0.37}, 0.0);
    for (int m = 0; m < 4; ++m)
        CHECK(near(a(m), 0.5));
}

TEST_CASE("ula_response at endfire alternates sign for half-wavelength spacing", "[channel]")
{
    const CVector a = ula_response({2, 0.5}, kPi / 2);
    const double h = 1.0 / std::sqrt(2.0);
    CHECK(near(a(0), h));
    CHECK(near(a(1), -h));
}

TEST_CASE("ula_response at 30 degrees steps by a quarter turn", "[channel]")
{
    const CVector a = ula_response({4, 0.5}, kPi / 6);
    const cplx j(0.0, 1.0);
    CHECK(near(a(0), 0.5));
    CHECK(near(a(1), 0.5 * j));
    CHECK(near(a(2), -0.5));
    CHECK(near(a(3), -0.5 * j));
}

TEST_CASE("steering vectors have unit norm", "[channel][property]")
{
    RandomStream rng(1);
    for (int t = 0; t < 200; ++t) {
        const int n = 1 + static_cast<int>(rng.bits() % 300);
        const double angle = rng.uniform(-kPi, kPi);
        CHECK(std::abs(ula_response({n, 0.5}, angle).norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("single broadside path gives the closed-form rank-one channel", "[channel]")
{
    PathSet p;
    p.gains = {1.0};
    p.aod = {0.0};
    p.aoa = {0.0};
    const auto ch = make_channel(p, {8, 0.5}, {4, 0.5});
    // sqrt(N_t N_r) * (1/sqrt(N_r)) * (1/sqrt(N_t)) = 1 in every entry.
    CHECK(frob_norm(ch.H - CMatrix::Ones(4, 8)) < 1e-12);
    CHECK(numerical_rank(ch.H) == 1);
}

TEST_CASE("draw_channel structure", "[channel][property]")
{
    RandomStream rng(2024);
    for (int t = 0; t < 50; ++t) {
        const auto ch = draw_channel(4, {64, 0.5}, {16, 0.5}, rng);
        REQUIRE(ch.H.rows() == 16);
        REQUIRE(ch.H.cols() == 64);
        REQUIRE(ch.paths.count() == 4);
        for (int i = 0; i < 4; ++i) {
            CHECK(std::abs(ch.A_t.col(i).norm() - 1.0) < 1e-12);
            CHECK(std::abs(ch.A_r.col(i).norm() - 1.0) < 1e-12);
            CHECK(std::abs(ch.paths.aod[i]) <= kPi / 2);
            CHECK(std::abs(ch.paths.aoa[i]) <= kPi / 2);
        }

        // H is exactly the weighted sum of its stored path terms.
        CMatrix sum = CMatrix::Zero(16, 64);
        for (int i = 0; i < 4; ++i)
            sum += ch.paths.gains[i] * ch.A_r.col(i) * ch.A_t.col(i).adjoint();
        sum *= std::sqrt(64.0 * 16.0 / 4.0);
        CHECK(frob_norm(sum - ch.H) <= 1e-12 * frob_norm(ch.H));

        // Column space inside span(A_r), row space inside span(A_t).
        const CMatrix proj_r = ch.A_r * pseudo_inverse(ch.A_r);
        const CMatrix proj_t = ch.A_t * pseudo_inverse(ch.A_t);
        CHECK(frob_norm(ch.H - proj_r * ch.H) < 1e-10 * frob_norm(ch.H));
        CHECK(frob_norm(ch.H - ch.H * proj_t.adjoint()) < 1e-10 * frob_norm(ch.H));
    }
}

TEST_CASE("128x16 channel has rank equal to the path count", "[channel]")
{
    RandomStream rng(77);
    for (int t = 0; t < 20; ++t) {
        const auto ch = draw_channel(4, {128, 0.5}, {16, 0.5}, rng);
        const auto f = svd_truncated(ch.H, 16);
        CHECK(f.sigma[3] > 1e-8 * f.sigma[0]);
        for (int i = 4; i < 16; ++i)
            CHECK(f.sigma[i] < 1e-8 * f.sigma[0]);
    }
}

TEST_CASE("mean channel energy equals N_t N_r", "[channel][statistical]")
{
    // E|beta|^2 = 1 with unit-norm steering vectors gives E||H||_F^2 = N_t N_r;
    // cross terms vanish since the gains are independent and zero-mean.
    RandomStream rng(99);
    const int draws = 10000;
    const double target = 32.0 * 8.0;
    double sum = 0.0, sum_sq = 0.0;
    for (int t = 0; t < draws; ++t) {
        const auto ch = draw_channel(4, {32, 0.5}, {8, 0.5}, rng);
        const double e = ch.H.squaredNorm();
        sum += e;
        sum_sq += e * e;
    }
    const double mean = sum / draws;
    const double stderr_ = std::sqrt((sum_sq / draws - mean * mean) / draws);
    CHECK(std::abs(mean - target) <= 3.0 * stderr_);
}

TEST_CASE("channel inputs are validated", "[channel][error]")
{
    RandomStream rng(1);
    CHECK_THROWS(draw_channel(0, {8, 0.5}, {4, 0.5}, rng));
    CHECK_THROWS(draw_channel(2, {0, 0.5}, {4, 0.5}, rng));
    CHECK_THROWS(draw_channel(2, {8, 0.0}, {4, 0.5}, rng));
    PathSet bad;
    bad.gains = {1.0, 1.0};
    bad.aod = {0.0};
    bad.aoa = {0.0, 0.0};
    CHECK_THROWS(make_channel(bad, {8, 0.5}, {4, 0.5}));
}

TEST_CASE("split streams are reproducible and distinct", "[rng]")
{
    const RandomStream root(42);
    auto a = root.split({1, 2});
    auto b = root.split({1, 2});
    auto c = root.split({2, 1});
    const auto va = a.bits();
    CHECK(va == b.bits());
    CHECK(va != c.bits());
}
