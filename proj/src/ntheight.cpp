#include "heightlab/ntheight.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "heightlab/errors.hpp"

namespace heightlab {

namespace {

using Real = boost::multiprecision::cpp_bin_float_50;

Real to_real(const Integer& n) { return Real(n.get_str()); }

long small_prime(const Integer& q) { return q.get_si(); }

Integer reduce(const Integer& n, const Integer& mod)
{
    Integer r;
    mpz_mod(r.get_mpz_t(), n.get_mpz_t(), mod.get_mpz_t());
    return r;
}

void require_infinite_orbit(const EllipticCurve& E, const EcPoint& P, int depth)
{
    if (P.infinity) throw TorsionOrbitError("local height of O_E is undefined; use partial_height");
    auto order = is_torsion(E, P);
    if (!order) return;
    long n = *order;
    int k = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++k;
    }
    // 2^{k-1} P has order 2 when the order is exactly 2^k.
    if (n == 1 && k - 1 < depth)
        throw TorsionOrbitError("doubling orbit of " + P.to_string() + " (order " + std::to_string(*order) +
                                ") reaches a 2-torsion point; see is_torsion");
}

Rational quarter_power(int k) { return Rational(1, ipow(Integer(4), static_cast<unsigned long>(k))); }

// v_q of a residue known modulo q^prec; throws when the residue vanishes.
long residue_valuation(const Integer& r, const Integer& q, long prec, const char* what)
{
    if (r == 0) throw PrecisionError(std::string("local height: ") + what + " vanished modulo q^" + std::to_string(prec));
    return valuation(r, q);
}

Rational finite_series_coefficient(const EllipticCurve& E, const EcPoint& P, long prime, int depth)
{
    const Integer q(prime);
    long prec = 64 + 4L * depth;
    Integer mod = ipow(q, static_cast<unsigned long>(prec));
    Integer X = reduce(P.x.get_num(), mod), Z = reduce(P.x.get_den(), mod);
    const Integer A = E.A(), B = E.B();
    const Rational base = Rational(-valuation(Integer(2), q)) + Rational(valuation(E.discriminant(), q), 4);
    Rational sum = 0;
    for (int k = 0; k < depth; ++k) {
        Integer Z2 = Z * Z;
        Integer C = reduce(X * X * X + A * X * Z2 + B * Z2 * Z, mod);
        long vz = residue_valuation(Z, q, prec, "Z");
        long vc = residue_valuation(C, q, prec, "x^3 + Ax + B");
        Rational term = base - Rational(vc - 3 * vz, 2);
        sum += term * quarter_power(k + 1);
        Integer X2 = X * X;
        Integer Xn = reduce(X2 * X2 - 2 * A * X2 * Z2 - 8 * B * X * Z2 * Z + A * A * Z2 * Z2, mod);
        Integer Zn = reduce(4 * Z * C, mod);
        long t = std::min(Xn == 0 ? prec : valuation(Xn, q), Zn == 0 ? prec : valuation(Zn, q));
        if (t >= prec) throw PrecisionError("local height: doubling lost all q-adic digits");
        Integer qt = ipow(q, static_cast<unsigned long>(t));
        prec -= t;
        mod = ipow(q, static_cast<unsigned long>(prec));
        X = reduce(Integer(Xn / qt), mod);
        Z = reduce(Integer(Zn / qt), mod);
    }
    long vx = X == 0 ? prec : valuation(X, q);
    long vz = Z == 0 ? prec : valuation(Z, q);
    if (vz >= prec && vx >= prec) throw PrecisionError("local height: tail point unresolved");
    if (vz > vx && vz >= prec) throw PrecisionError("local height: tail valuation exceeds tracked precision");
    sum += Rational(std::max(0L, vz - vx), 2) * quarter_power(depth);
    return sum;
}

double archimedean_series(const EllipticCurve& E, const EcPoint& P, int depth)
{
    using boost::multiprecision::abs;
    using boost::multiprecision::log;
    const Real A = to_real(E.A()), B = to_real(E.B());
    const Real log_disc = log(abs(to_real(E.discriminant())));
    const Real log2 = log(Real(2));
    Real X = to_real(P.x.get_num()), Z = to_real(P.x.get_den());
    Real sum = 0, weight = 1;
    for (int k = 0; k < depth; ++k) {
        weight /= 4;
        Real Z2 = Z * Z;
        Real C = X * X * X + A * X * Z2 + B * Z2 * Z;
        if (C == 0 || Z == 0) throw TorsionOrbitError("archimedean series: orbit reached a 2-torsion point");
        sum += weight * (log2 + (log(abs(C)) - 3 * log(abs(Z))) / 2 - log_disc / 4);
        Real X2 = X * X;
        Real Xn = X2 * X2 - 2 * A * X2 * Z2 - 8 * B * X * Z2 * Z + A * A * Z2 * Z2;
        Real Zn = 4 * Z * C;
        Real scale = std::max(abs(Xn), abs(Zn));
        X = Xn / scale;
        Z = Zn / scale;
    }
    if (Z == 0) throw TorsionOrbitError("archimedean series: orbit reached O_E");
    Real top = std::max(abs(X), abs(Z));
    sum += weight * (log(top) - log(abs(Z))) / 2;
    return static_cast<double>(sum);
}

double height_log(const Rational& q)
{
    return rational_height(q).value();
}

// Bound on |h_hat - (1/2) h(x)| for the limit tail.
double limit_tail_constant(const EllipticCurve& E)
{
    Integer a3 = E.A() * E.A() * E.A();
    Rational j = Rational(-1728 * 64 * a3) / Rational(E.discriminant());
    double hj = j == 0 ? 0.0 : height_log(j);
    double hd = height_log(Rational(E.discriminant()));
    return hj / 8 + hd / 12 + 1.07;
}

double series_tail_constant(const EllipticCurve& E, long place)
{
    if (place == kArchimedean) {
        double ld = std::fabs(log_abs(E.discriminant()));
        double lc = std::log(1.0 + std::fabs(E.A().get_d()) + std::fabs(E.B().get_d()));
        return 1.0 + ld / 4 + lc;
    }
    const Integer q(place);
    double vd = static_cast<double>(valuation(E.discriminant(), q));
    double v2 = static_cast<double>(valuation(Integer(2), q));
    return (vd / 6 + v2 + 1) * std::log(static_cast<double>(place));
}

}  // namespace

const char* to_string(LocalMethod m)
{
    switch (m) {
    case LocalMethod::series: return "series";
    case LocalMethod::closed_form: return "closed_form";
    case LocalMethod::limit: return "limit";
    }
    return "?";
}

LocalHeight local_height_series(const EllipticCurve& E, const EcPoint& P, long place, int depth)
{
    check_on_curve(E, P);
    if (depth < 1) throw ValidationError("local_height_series: depth must be >= 1");
    if (place != kArchimedean && (place < 2 || !is_prime(place))) throw ValidationError("place must be 0 or a prime");
    require_infinite_orbit(E, P, depth);
    LocalHeight out;
    out.place = place;
    out.method = LocalMethod::series;
    const double tail = std::ldexp(1.0, -2 * depth);
    if (place == kArchimedean) {
        out.value = archimedean_series(E, P, depth);
        out.error = series_tail_constant(E, place) * tail + 1e-30;
        return out;
    }
    Rational c = finite_series_coefficient(E, P, place, depth);
    out.coefficient = c;
    out.value = c.get_d() * std::log(static_cast<double>(place));
    const bool good = !mpz_divisible_ui_p(E.discriminant().get_mpz_t(), static_cast<unsigned long>(place));
    // At good primes the duplication relation holds with exact closed-form terms,
    // so the truncated sum is the exact value.
    out.error = good ? 0.0 : series_tail_constant(E, place) * tail;
    return out;
}

LocalHeight local_height_good_closed(const EllipticCurve& E, const EcPoint& P, long p)
{
    if (p < 2 || !is_prime(p)) throw ValidationError("local_height_good_closed: p must be prime");
    if (mpz_divisible_ui_p(E.discriminant().get_mpz_t(), static_cast<unsigned long>(p)))
        throw DomainError("local_height_good_closed: bad reduction at " + std::to_string(p));
    if (P.infinity) throw ValidationError("local_height_good_closed: P must be affine");
    check_on_curve(E, P);
    LocalHeight out;
    out.place = p;
    out.method = LocalMethod::closed_form;
    long v = valuation(P.x.get_den(), Integer(p));
    out.coefficient = Rational(v, 2);
    out.coefficient->canonicalize();
    out.value = out.coefficient->get_d() * std::log(static_cast<double>(p));
    return out;
}

std::vector<long> height_places(const EllipticCurve& E, const EcPoint& P)
{
    std::set<long> primes;
    if (!P.infinity)
        for (const auto& q : prime_divisors(P.x.get_den())) primes.insert(small_prime(q));
    for (const auto& q : prime_divisors(abs(E.discriminant()))) primes.insert(small_prime(q));
    std::vector<long> out{kArchimedean};
    out.insert(out.end(), primes.begin(), primes.end());
    return out;
}

std::vector<Integer> doubling_gcd_primes(const EllipticCurve& E)
{
    std::set<Integer> ps{Integer(2), Integer(3)};
    Integer D = abs(Integer(4 * E.A() * E.A() * E.A() + 27 * E.B() * E.B()));
    for (const auto& q : prime_divisors(D)) ps.insert(q);
    return {ps.begin(), ps.end()};
}

ProjectiveX x_double(const EllipticCurve& E, const ProjectiveX& q, const std::vector<Integer>& primes)
{
    const Integer& A = E.A();
    const Integer& B = E.B();
    const Integer& X = q.X;
    const Integer& Z = q.Z;
    Integer X2 = X * X, Z2 = Z * Z;
    ProjectiveX out;
    out.X = X2 * X2 - 2 * A * X2 * Z2 - 8 * B * X * Z2 * Z + A * A * Z2 * Z2;
    out.Z = 4 * Z * (X2 * X + A * X * Z2 + B * Z2 * Z);
    for (const auto& p : primes) {
        while (mpz_divisible_p(out.X.get_mpz_t(), p.get_mpz_t()) && mpz_divisible_p(out.Z.get_mpz_t(), p.get_mpz_t())) {
            mpz_divexact(out.X.get_mpz_t(), out.X.get_mpz_t(), p.get_mpz_t());
            mpz_divexact(out.Z.get_mpz_t(), out.Z.get_mpz_t(), p.get_mpz_t());
        }
    }
    return out;
}

NtHeight nt_height(const EllipticCurve& E, const EcPoint& P, HeightMode mode, int depth)
{
    check_on_curve(E, P);
    NtHeight out;
    if (auto order = is_torsion(E, P)) {
        out.torsion_order = order;
        if (mode == HeightMode::local_sum) out.breakdown = HeightBreakdown{};
        return out;
    }
    if (mode == HeightMode::local_sum) {
        if (depth == 0) depth = kDefaultSeriesDepth;
        HeightBreakdown bd;
        for (long place : height_places(E, P)) {
            LocalHeight lh = local_height_series(E, P, place, depth);
            const bool good = place != kArchimedean &&
                              !mpz_divisible_ui_p(E.discriminant().get_mpz_t(), static_cast<unsigned long>(place));
            if (good) lh.closed_form_agrees = local_height_good_closed(E, P, place).coefficient == lh.coefficient;
            bd.total += lh.value;
            bd.error += lh.error;
            bd.entries.push_back(lh);
        }
        out.value = bd.total;
        out.error = bd.error;
        out.breakdown = std::move(bd);
        return out;
    }
    if (depth == 0) depth = kDefaultLimitDepth;
    if (depth < 1 || depth > kMaxLimitDepth)
        throw ValidationError("limit depth must lie in [1, " + std::to_string(kMaxLimitDepth) + "]");
    const auto primes = doubling_gcd_primes(E);
    ProjectiveX q{P.x.get_num(), P.x.get_den()};
    for (int k = 0; k < depth; ++k) q = x_double(E, q, primes);
    const double h = std::max(log_abs(q.X), log_abs(q.Z));
    out.value = std::ldexp(h / 2, -2 * depth);
    out.error = std::ldexp(limit_tail_constant(E), -2 * depth);
    return out;
}

double partial_height(const EllipticCurve& E, const EcPoint& P, long place, int depth)
{
    if (P.infinity) return 0.0;
    return local_height_series(E, P, place, depth).value;
}

ParallelogramResult parallelogram_check(const EllipticCurve& E, const EcPoint& P, const EcPoint& Q, double tol, int depth)
{
    auto h = [&](const EcPoint& R) { return nt_height(E, R, HeightMode::local_sum, depth).value; };
    const EcPoint sum = ec_add(E, P, Q);
    const EcPoint diff = ec_add(E, P, ec_neg(Q));
    ParallelogramResult out;
    out.residual = std::fabs(h(sum) + h(diff) - 2 * (h(P) + h(Q)));
    out.ok = out.residual <= tol;
    return out;
}

HeightValue semiabelian_height(const std::vector<AlgebraicNumber>& alphas, const EllipticCurve& E, const EcPoint& P)
{
    HeightValue out;
    for (const auto& a : alphas) {
        HeightValue h = weil_height(a);
        out.value += h.value;
        out.error += h.error;
    }
    NtHeight nt = nt_height(E, P, HeightMode::local_sum);
    out.value += nt.value;
    out.error += nt.error;
    return out;
}

GammaSatVerdict gamma_sat_check(const std::vector<AlgebraicNumber>& alphas, const EllipticCurve& E, const EcPoint& P,
                                const Rational& a, long bound)
{
    GammaSatVerdict out;
    Integer witness = 1;
    bool inconclusive = false;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        SatVerdict v = sat_membership(alphas[i], a, bound);
        out.components.push_back(v);
        if (v.kind == SatVerdict::Kind::non_member) {
            out.kind = SatVerdict::Kind::non_member;
            out.detail = "component " + std::to_string(i) + ": " + v.detail;
            return out;
        }
        if (v.kind == SatVerdict::Kind::inconclusive) inconclusive = true;
        else witness *= v.n;
    }
    out.torsion_order = is_torsion(E, P);
    if (!out.torsion_order) {
        // Torsion orders over Q are at most 12, so the search bound is conclusive.
        out.kind = SatVerdict::Kind::non_member;
        out.detail = "P has infinite order";
        return out;
    }
    if (inconclusive) {
        out.kind = SatVerdict::Kind::inconclusive;
        out.detail = "a component exceeded the exponent bound";
        return out;
    }
    out.kind = SatVerdict::Kind::member;
    out.witness = witness * *out.torsion_order;
    return out;
}

}  // namespace heightlab
