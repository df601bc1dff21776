#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "heightlab/errors.hpp"
#include "heightlab/ntheight.hpp"

using namespace heightlab;

namespace {

EcPoint pt(Rational x, Rational y) { return EcPoint::affine(std::move(x), std::move(y)); }

// (1/2) 4^{-n} h(x([2^n]P)) from exact affine doubling.
double naive_limit(const EllipticCurve& E, const EcPoint& P, int n)
{
    EcPoint Q = P;
    for (int k = 0; k < n; ++k) Q = ec_add(E, Q, Q);
    double h = std::max(log_abs(Q.x.get_num()), log_abs(Q.x.get_den()));
    return std::ldexp(h / 2, -2 * n);
}

struct Sample {
    EllipticCurve E;
    EcPoint P;
};

std::vector<Sample> samples()
{
    EllipticCurve E1(0, -2), E2(1, 1), E3(0, 3);
    return {
        {E1, pt(3, 5)},
        {E1, ec_mul(E1, 2, pt(3, 5))},
        {E1, ec_mul(E1, -3, pt(3, 5))},
        {E1, ec_mul(E1, 4, pt(3, 5))},
        {E2, pt(0, 1)},
        {E2, ec_mul(E2, 2, pt(0, 1))},
        {E2, pt(72, 611)},
        {E3, pt(1, 2)},
        {E3, ec_mul(E3, -2, pt(1, 2))},
        {E3, ec_mul(E3, 3, pt(1, 2))},
    };
}

}  // namespace

TEST_CASE("local series examples")
{
    EllipticCurve E(0, -2);
    EcPoint P = pt(3, 5);
    auto l5 = local_height_series(E, P, 5, 8);
    CHECK(*l5.coefficient == 0);
    CHECK(l5.error == 0);

    // x([2]P) = 129/100 has |x|_2 = 4; the prime 2 is bad (v_2(Delta) = 6), so the
    // series carries the discriminant term: lambda_2 = (3/2) log 2 up to the tail.
    auto P2 = ec_mul(E, 2, P);
    auto l2 = local_height_series(E, P2, 2, kDefaultSeriesDepth);
    CHECK(std::fabs(l2.coefficient->get_d() - 1.5) * std::log(2.0) <= l2.error);
    CHECK(l2.error > 0);
    CHECK(l2.error < 1e-6);

    // At the good prime 5 the series equals the closed form (1/2) log max(1, |x|_5)
    auto s5 = local_height_series(E, P2, 5, kDefaultSeriesDepth);
    auto c5 = local_height_good_closed(E, P2, 5);
    CHECK(*s5.coefficient == 1);
    CHECK(*c5.coefficient == 1);
    CHECK(*local_height_good_closed(E, P2, 43).coefficient == 0);
    CHECK(*local_height_good_closed(E, P, 7).coefficient == 0);
    CHECK_THROWS_AS(local_height_good_closed(E, P, 3), DomainError);
}

TEST_CASE("series refuses orbits that reach 2-torsion or O")
{
    EllipticCurve E(4, 0);
    CHECK_THROWS_AS(local_height_series(E, pt(2, 4), kArchimedean, 5), TorsionOrbitError);
    CHECK_THROWS_AS(local_height_series(E, pt(0, 0), 2, 5), TorsionOrbitError);
    CHECK_THROWS_AS(local_height_series(EllipticCurve(0, 1), pt(-1, 0), kArchimedean, 3), TorsionOrbitError);
}

TEST_CASE("closed form equals series at every good prime dividing the denominator")
{
    for (auto& s : samples()) {
        for (long k = 1; k <= 3; ++k) {
            EcPoint Q = ec_mul(s.E, k, s.P);
            for (const auto& q : prime_divisors(Q.x.get_den())) {
                long p = q.get_si();
                if (p < 5 || mpz_divisible_ui_p(s.E.discriminant().get_mpz_t(), p)) continue;
                auto series = local_height_series(s.E, Q, p);
                auto closed = local_height_good_closed(s.E, Q, p);
                CHECK(*series.coefficient == *closed.coefficient);
                CHECK(*closed.coefficient > 0);
            }
        }
    }
}

TEST_CASE("local_sum agrees with limit mode and with a naive exact limit")
{
    for (auto& s : samples()) {
        auto a = nt_height(s.E, s.P, HeightMode::local_sum, 12);
        auto b = nt_height(s.E, s.P, HeightMode::limit, 10);
        CHECK(std::fabs(a.value - b.value) <= 1e-4);
        CHECK(std::fabs(a.value - b.value) <= a.error + b.error);
        CHECK(a.value > 0);
        // the naive limit at depth 4 has error at most C 4^{-4}
        CHECK(std::fabs(naive_limit(s.E, s.P, 4) - b.value) <= std::ldexp(b.error, 12) + 1e-12);
        for (auto& entry : a.breakdown->entries)
            if (entry.closed_form_agrees) CHECK(*entry.closed_form_agrees);
    }
}

TEST_CASE("limit mode: x_double matches exact doubling")
{
    for (auto& s : samples()) {
        auto primes = doubling_gcd_primes(s.E);
        ProjectiveX q{s.P.x.get_num(), s.P.x.get_den()};
        EcPoint Q = s.P;
        for (int k = 0; k < 4; ++k) {
            q = x_double(s.E, q, primes);
            Q = ec_add(s.E, Q, Q);
            CHECK(Rational(q.X, q.Z) == Q.x);
            // the only common factors left are powers of the listed primes
            Integer g = gcd(q.X, q.Z);
            for (const auto& p : primes)
                while (g % p == 0) g /= p;
            CHECK(g == 1);
        }
    }
}

TEST_CASE("quadraticity, symmetry and parallelogram law")
{
    EllipticCurve E(0, -2);
    EcPoint P = pt(3, 5);
    double h1 = nt_height(E, P, HeightMode::local_sum).value;
    for (long m = 2; m <= 4; ++m) {
        double hm = nt_height(E, ec_mul(E, m, P), HeightMode::local_sum).value;
        CHECK(std::fabs(hm - m * m * h1) < 1e-5);
    }
    CHECK(nt_height(E, ec_neg(P), HeightMode::local_sum).value == h1);
    CHECK(parallelogram_check(E, P, EcPoint::zero(), 1e-5).residual < 1e-9);
    CHECK(parallelogram_check(E, P, ec_mul(E, 2, P), 1e-5).ok);
    CHECK(parallelogram_check(E, P, ec_neg(P), 1e-5).ok);
    EllipticCurve F(1, 1);
    CHECK(parallelogram_check(F, pt(0, 1), pt(72, 611), 1e-5).ok);
}

TEST_CASE("partial heights sum to the total")
{
    EllipticCurve E(0, -2);
    EcPoint P = pt(3, 5);
    CHECK(partial_height(E, EcPoint::zero(), kArchimedean) == 0);
    CHECK(partial_height(E, P, 7) == 0);
    auto nt = nt_height(E, P, HeightMode::local_sum);
    double sum = 0;
    for (long v : height_places(E, P)) sum += partial_height(E, P, v);
    CHECK(std::fabs(sum - nt.value) < 1e-12);
    double finite = 0;
    for (auto& e : nt.breakdown->entries)
        if (e.place != kArchimedean) finite += e.value;
    CHECK(std::fabs(partial_height(E, P, kArchimedean) - (nt.value - finite)) < 1e-5);
}

TEST_CASE("torsion points have height exactly zero")
{
    for (auto [A, B, x, y, n] : std::vector<std::array<long, 5>>{{4, 0, 2, 4, 4}, {4, 0, 0, 0, 2}, {0, 1, 2, 3, 6}, {0, 1, 0, 1, 3}, {-43, 166, 3, 8, 7}}) {
        EllipticCurve E(A, B);
        for (auto mode : {HeightMode::local_sum, HeightMode::limit}) {
            auto h = nt_height(E, pt(x, y), mode);
            CHECK(h.value == 0.0);
            CHECK(h.torsion_order == n);
        }
    }
}

TEST_CASE("semiabelian heights")
{
    EllipticCurve E(4, 0);
    CHECK(semiabelian_height({AlgebraicNumber::rational(1), AlgebraicNumber::rational(1)}, E, EcPoint::zero()).value == 0);
    CHECK(semiabelian_height({AlgebraicNumber::rational(2)}, E, EcPoint::zero()).value == doctest::Approx(std::log(2.0)));
    auto h = semiabelian_height({AlgebraicNumber::root_of_unity(3), AlgebraicNumber::radical(2, 3)}, E, pt(2, 4));
    CHECK(h.value == doctest::Approx(std::log(2.0) / 3).epsilon(1e-12));
    EllipticCurve F(0, -2);
    auto g = semiabelian_height({AlgebraicNumber::rational(1)}, F, pt(3, 5));
    CHECK(g.value == doctest::Approx(nt_height(F, pt(3, 5), HeightMode::local_sum).value));
}

TEST_CASE("gamma_sat_check")
{
    EllipticCurve E(4, 0);
    auto v = gamma_sat_check({AlgebraicNumber::rational(-8), AlgebraicNumber::radical(2, 3)}, E, pt(2, 4), 2, 50);
    CHECK(v.kind == SatVerdict::Kind::member);
    CHECK(v.witness == 12);
    auto w = gamma_sat_check({AlgebraicNumber::rational(3)}, E, EcPoint::zero(), 2, 50);
    CHECK(w.kind == SatVerdict::Kind::non_member);
    auto u = gamma_sat_check({AlgebraicNumber::rational(1)}, E, EcPoint::zero(), 5, 50);
    CHECK(u.kind == SatVerdict::Kind::member);
    CHECK(u.witness == 1);
    auto inf = gamma_sat_check({AlgebraicNumber::rational(2)}, EllipticCurve(0, -2), pt(3, 5), 2, 50);
    CHECK(inf.kind == SatVerdict::Kind::non_member);
}
