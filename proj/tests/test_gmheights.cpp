#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <set>

#include "heightlab/errors.hpp"
#include "heightlab/gmheights.hpp"
#include "oracles.hpp"

using namespace heightlab;

namespace {

std::vector<long> longs(const IntPolynomial& f)
{
    std::vector<long> out;
    for (auto& c : f.coefficients()) out.push_back(c.get_si());
    return out;
}

}  // namespace

TEST_CASE("rational heights")
{
    CHECK(weil_height(AlgebraicNumber::rational(Rational(7, 2))).value == doctest::Approx(std::log(7.0)).epsilon(1e-14));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 300; ++i) {
        long p = static_cast<long>(rng() % 200001) - 100000;
        long q = 1 + static_cast<long>(rng() % 100000);
        if (p == 0) p = 1;
        Rational x(p, q);
        x.canonicalize();
        double expect = std::log(std::max(std::fabs(x.get_num().get_d()), x.get_den().get_d()));
        CHECK(std::fabs(rational_height(x).value() - expect) < 1e-12);
        CHECK(std::fabs(weil_height(AlgebraicNumber::rational(x)).value - expect) < 1e-9);
    }
}

TEST_CASE("roots of unity have height zero and are recognised")
{
    for (long n = 1; n <= 50; ++n) {
        auto z = AlgebraicNumber::root_of_unity(n);
        CHECK(weil_height(z).value < 1e-12);
        CHECK(is_root_of_unity(z) == n);
    }
    CHECK(is_root_of_unity(AlgebraicNumber::rational(-1)) == 2);
    CHECK_FALSE(is_root_of_unity(AlgebraicNumber::rational(2)));
    auto z9 = AlgebraicNumber::from_minpoly(IntPolynomial{1, 0, 0, 1, 0, 0, 1}, std::polar(1.0, 2 * M_PI / 9));
    CHECK(is_root_of_unity(z9) == 9);
    // X^4 - X^2 + 1 is Phi_12; X^2 - X + 1 Phi_6; 2X^2 + ... not monic
    CHECK(is_root_of_unity(AlgebraicNumber::from_minpoly(IntPolynomial{1, 0, -1, 0, 1}, {0.86, 0.5})) == 12);
    CHECK_FALSE(is_root_of_unity(AlgebraicNumber::from_minpoly(IntPolynomial{1, -1, 2}, {0.25, 0.66})));
}

TEST_CASE("radical heights agree with an independent Mahler measure")
{
    CHECK(weil_height(AlgebraicNumber::radical(2, 8)).value == doctest::Approx(std::log(2.0) / 8).epsilon(1e-12));
    for (long num : {2L, 3L, -5L, 12L, 7L}) {
        for (long den : {1L, 3L, 11L}) {
            for (long k : {2L, 3L, 5L, 6L}) {
                Rational a(num, den);
                a.canonicalize();
                if (!capelli_irreducible(a, k)) continue;
                auto alpha = AlgebraicNumber::radical(a, k);
                double h = weil_height(alpha).value;
                CHECK(std::fabs(h - oracle::mahler_height(longs(alpha.minpoly()))) < 1e-9);
                CHECK(std::fabs(h - rational_height(a).value() / k) < 1e-9);
                for (std::size_t i = 0; i < alpha.degree(); ++i)
                    CHECK(std::fabs(weil_height(alpha.conjugate(i)).value - h) < 1e-12);
            }
        }
    }
}

TEST_CASE("weil_height of assorted irreducible polynomials against the oracle")
{
    std::vector<std::vector<long>> polys{{-1, -1, 1}, {1, -1, 0, 1}, {-3, 0, 2}, {5, 1, 0, 0, 3}, {1, 1, 1, 1, 1, 1, 1}, {-7, 2, 0, 0, 0, 1}};
    for (auto& c : polys) {
        std::vector<Integer> ci(c.begin(), c.end());
        AlgebraicNumber alpha(IntPolynomial(ci), 0);
        auto hv = weil_height(alpha);
        CHECK(std::fabs(hv.value - oracle::mahler_height(c)) < 1e-9);
        CHECK(hv.value >= 0);
    }
}

TEST_CASE("sat_element_realize examples")
{
    auto r1 = sat_element_realize(SatElement(0, 0, 1, 1, 2, 3));
    CHECK(r1.exact_height.coefficient == Rational(1, 3));
    CHECK(r1.exact_height.argument == 2);
    CHECK(r1.number.minpoly() == IntPolynomial{-2, 0, 0, 1});
    CHECK(weil_height(r1.number).value == doctest::Approx(std::log(2.0) / 3).epsilon(1e-12));

    auto r2 = sat_element_realize(SatElement(1, 1, 0, 0, 2, 3));
    CHECK(r2.exact_height.value() == 0);
    CHECK(is_root_of_unity(r2.number) == 3);

    auto r3 = sat_element_realize(SatElement(0, 0, -2, 1, 2, 3));
    CHECK(r3.exact_height.coefficient == Rational(2, 3));
    CHECK(weil_height(r3.number).value == doctest::Approx(2 * std::log(2.0) / 3).epsilon(1e-12));
}

TEST_CASE("sat element heights: powers exact, products subadditive, realizations agree")
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        long p = (rng() % 2) ? 3 : 5;
        Rational a = (rng() % 2) ? Rational(2) : Rational(3, 7);
        SatElement x(static_cast<long>(rng() % 25), static_cast<int>(rng() % 3), static_cast<long>(rng() % 7) - 3, static_cast<int>(rng() % 3), a, p);
        SatElement y(static_cast<long>(rng() % 25), static_cast<int>(rng() % 3), static_cast<long>(rng() % 7) - 3, static_cast<int>(rng() % 3), a, p);
        long k = static_cast<long>(rng() % 9) - 4;
        CHECK(x.pow(k).exact_height().coefficient == abs(Rational(k)) * x.exact_height().coefficient);
        CHECK((x * y).exact_height().coefficient <= x.exact_height().coefficient + y.exact_height().coefficient);
        if (x.pow(0) == x) continue;
        auto real = sat_element_realize(x);
        auto hv = weil_height(real.number);
        CHECK(std::fabs(hv.value - real.exact_height.value()) < 1e-9 + hv.error);
    }
}

TEST_CASE("sat_membership examples")
{
    auto v1 = sat_membership(AlgebraicNumber::rational(-8), 2, 10);
    CHECK(v1.kind == SatVerdict::Kind::member);
    CHECK(v1.n == 1);
    CHECK(v1.m == 3);
    CHECK(v1.root_order == 2);

    auto v2 = sat_membership(AlgebraicNumber::rational(3), 2, 10);
    CHECK(v2.kind == SatVerdict::Kind::non_member);
    CHECK(v2.certificate == SatVerdict::Certificate::valuation);

    auto v3 = sat_membership(AlgebraicNumber::radical(2, 3), 2, 10);
    CHECK(v3.kind == SatVerdict::Kind::member);
    CHECK(v3.n == 3);
    CHECK(v3.m == 1);

    auto v4 = sat_membership(AlgebraicNumber::radical(2, 9), 2, 5);
    CHECK(v4.kind == SatVerdict::Kind::inconclusive);

    // 1 + 2^{1/3} has norm 3: outside <2>
    auto v5 = sat_membership(AlgebraicNumber::from_minpoly(IntPolynomial{-3, 3, -3, 1}, 2.26), 2, 10);
    CHECK(v5.kind == SatVerdict::Kind::non_member);
}

TEST_CASE("sat_membership classifies constructed members with their exact witness")
{
    for (long p : {3L, 5L}) {
        for (int r = 0; r <= 2; ++r) {
            for (int s = 0; s <= 2; ++s) {
                for (long m = -2; m <= 2; ++m) {
                    if (m == 0) continue;
                    SatElement e(1, r, m, s, 2, p);
                    auto real = sat_element_realize(e);
                    if (real.number.degree() > 50) continue;
                    auto v = sat_membership(real.number, 2, 200);
                    REQUIRE(v.kind == SatVerdict::Kind::member);
                    // alpha^n = zeta a^m with m/n = e.m / p^s in lowest terms
                    Rational ratio(e.m(), ipow(Integer(p), e.s()));
                    ratio.canonicalize();
                    CHECK(Rational(v.m, v.n) == ratio);
                }
            }
        }
    }
}

TEST_CASE("Northcott enumeration of small rationals")
{
    std::set<std::pair<long, long>> seen;
    for (long p = -20; p <= 20; ++p)
        for (long q = 1; q <= 20; ++q)
            if (p != 0) {
                Rational x(p, q);
                x.canonicalize();
                if (rational_height(x).value() <= std::log(20.0) + 1e-12) seen.insert({x.get_num().get_si(), x.get_den().get_si()});
            }
    long count = 0;
    for (long p = -20; p <= 20; ++p)
        for (long q = 1; q <= 20; ++q)
            if (p != 0 && std::gcd(p, q) == 1) ++count;
    CHECK(static_cast<long>(seen.size()) == count);
}
