#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "heightlab/equidist.hpp"
#include "heightlab/errors.hpp"
#include "heightlab/ntheight.hpp"

using namespace heightlab;

TEST_CASE("gauss statistic")
{
    auto g1 = gauss_statistic(3, 3, 1);
    CHECK(g1.exponent == Rational(1, 3));
    CHECK(g1.stat.value == doctest::Approx(std::pow(3.0, -1.0 / 3)).epsilon(1e-14));
    CHECK(g1.stat.value == doctest::Approx(0.693361).epsilon(1e-6));
    CHECK(g1.stat.limit == 1.0);
    double prev = 0;
    for (long n = 0; n <= 6; ++n) {
        auto g = gauss_statistic(3, 3, n);
        CHECK(g.exponent == Rational(1, static_cast<long>(std::pow(3, n))));
        CHECK(g.stat.value == doctest::Approx(std::pow(3.0, -std::pow(3.0, -static_cast<double>(n)))).epsilon(1e-14));
        CHECK(g.stat.value > prev);
        prev = g.stat.value;
    }
    for (long n = 0; n <= 5; ++n) CHECK(gauss_statistic(2, 3, n).stat.value == 1.0);
    // |1/9|_3 = 9: the minimum picks the reciprocal
    CHECK(gauss_statistic(Rational(1, 9), 3, 1).exponent == Rational(2, 3));
    CHECK_THROWS_AS(gauss_statistic(2, 4, 1), ValidationError);
}

TEST_CASE("bernoulli uniformity against a brute sum")
{
    CHECK(bernoulli_b2(0) == Rational(1, 6));
    CHECK(bernoulli_uniformity({Rational(0)}) == Rational(1, 6));
    CHECK(bernoulli_uniformity(uniform_grid(2)) == Rational(1, 24));
    for (long N = 1; N <= 50; ++N) {
        Rational sum = 0;
        for (long j = 0; j < N; ++j) {
            Rational x(j, N);
            x.canonicalize();
            sum += x * x - x + Rational(1, 6);
        }
        sum /= N;
        CHECK(bernoulli_uniformity(uniform_grid(N)) == sum);
        CHECK(sum == Rational(1, 6 * N * N));
    }
    CHECK(std::fabs(bernoulli_uniformity(uniform_grid(1000)).get_d()) < 1e-3);
    CHECK_THROWS_AS(bernoulli_uniformity({Rational(1)}), ValidationError);
    CHECK_THROWS_AS(bernoulli_uniformity({Rational(-1, 2)}), ValidationError);
}

TEST_CASE("complex archimedean height matches the real series on rational points")
{
    EllipticCurve E(0, -2);
    EcPoint P = EcPoint::affine(3, 5);
    for (int k = 1; k <= 3; ++k) {
        EcPoint Q = ec_mul(E, k, P);
        double lib = local_height_series(E, Q, kArchimedean, 12).value;
        CHECK(std::fabs(archimedean_lambda_complex(E, {Q.x.get_d(), 0.0}, 12) - lib) < 1e-9);
    }
}

TEST_CASE("SUZ torsion averages")
{
    EllipticCurve E(0, -2);
    auto s3 = suz_torsion_average(E, 3, 5.0, 12);
    CHECK(s3.sample_count == 8);
    CHECK(s3.limit == 0.0);
    CHECK(std::isfinite(s3.value));
    auto s3_low = suz_torsion_average(E, 3, 1.0, 12);
    CHECK(s3_low.value <= s3.value + 1e-12);
    for (long N : {5L, 7L, 9L, 11L, 13L}) {
        auto s = suz_torsion_average(E, N, 5.0, 12);
        CHECK(s.sample_count == N * N - 1);
        CHECK(std::isfinite(s.value));
    }
    CHECK_THROWS_AS(suz_torsion_average(E, 4, 5.0, 12), ValidationError);
    CHECK_THROWS_AS(suz_torsion_average(E, 15, 5.0, 12), ValidationError);
}
