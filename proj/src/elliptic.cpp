#include "heightlab/elliptic.hpp"

#include <cmath>
#include <vector>

#include "heightlab/errors.hpp"

namespace heightlab {

EllipticCurve::EllipticCurve(Integer A, Integer B) : A_(std::move(A)), B_(std::move(B))
{
    disc_ = -16 * (4 * A_ * A_ * A_ + 27 * B_ * B_);
    if (disc_ == 0) throw ValidationError("singular curve: 4A^3 + 27B^2 = 0 for " + to_string());
}

Rational EllipticCurve::residual(const Rational& x, const Rational& y) const
{
    return y * y - x * x * x - Rational(A_) * x - Rational(B_);
}

EllipticCurve EllipticCurve::minimal_at(long p) const
{
    Integer a = A_, b = B_;
    const Integer p4 = ipow(Integer(p), 4), p6 = ipow(Integer(p), 6);
    while (mpz_divisible_p(a.get_mpz_t(), p4.get_mpz_t()) && mpz_divisible_p(b.get_mpz_t(), p6.get_mpz_t())) {
        a /= p4;
        b /= p6;
    }
    return EllipticCurve(a, b);
}

std::string EllipticCurve::to_string() const
{
    return "y^2 = x^3 + (" + A_.get_str() + ")x + (" + B_.get_str() + ")";
}

std::string EcPoint::to_string() const
{
    if (infinity) return "O";
    return "(" + x.get_str() + ", " + y.get_str() + ")";
}

namespace {

long mod_long(const Integer& n, long p)
{
    return static_cast<long>(mpz_fdiv_ui(n.get_mpz_t(), static_cast<unsigned long>(p)));
}

long powmod(long b, long e, long m)
{
    long long r = 1, x = b % m;
    while (e > 0) {
        if (e & 1) r = r * x % m;
        x = x * x % m;
        e >>= 1;
    }
    return static_cast<long>(r);
}

bool is_square_mod(long a, long p)
{
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return false;
    return powmod(a, (p - 1) / 2, p) == 1;
}

void require_prime(long p)
{
    if (p < 2 || !is_prime(p)) throw ValidationError("expected a prime, got " + std::to_string(p));
}

}  // namespace

void check_on_curve(const EllipticCurve& E, const EcPoint& P)
{
    if (P.infinity) return;
    Rational res = E.residual(P.x, P.y);
    if (res != 0) throw ValidationError("point " + P.to_string() + " is not on " + E.to_string() + ": y^2 - x^3 - Ax - B = " + res.get_str());
}

EcPoint ec_neg(const EcPoint& P)
{
    if (P.infinity) return P;
    return EcPoint::affine(P.x, -P.y);
}

EcPoint ec_add(const EllipticCurve& E, const EcPoint& P, const EcPoint& Q)
{
    check_on_curve(E, P);
    check_on_curve(E, Q);
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    Rational slope;
    if (P.x == Q.x) {
        if (P.y != Q.y || P.y == 0) return EcPoint::zero();
        slope = (3 * P.x * P.x + Rational(E.A())) / (2 * P.y);
    } else {
        slope = (Q.y - P.y) / (Q.x - P.x);
    }
    Rational x3 = slope * slope - P.x - Q.x;
    Rational y3 = slope * (P.x - x3) - P.y;
    return EcPoint::affine(x3, y3);
}

EcPoint ec_mul(const EllipticCurve& E, const Integer& n, const EcPoint& P)
{
    check_on_curve(E, P);
    Integer k = abs(n);
    EcPoint base = n < 0 ? ec_neg(P) : P;
    EcPoint acc = EcPoint::zero();
    const std::size_t bits = k == 0 ? 0 : mpz_sizeinbase(k.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        acc = ec_add(E, acc, acc);
        if (mpz_tstbit(k.get_mpz_t(), i)) acc = ec_add(E, acc, base);
    }
    return acc;
}

const char* to_string(ReductionType t)
{
    switch (t) {
    case ReductionType::good: return "good";
    case ReductionType::mult_split: return "mult_split";
    case ReductionType::mult_nonsplit: return "mult_nonsplit";
    case ReductionType::additive: return "additive";
    }
    return "?";
}

ReductionType reduction_type(const EllipticCurve& E, long p)
{
    require_prime(p);
    if (p < 5) throw DomainError("reduction_type: p = " + std::to_string(p) + " is not supported by the short model");
    EllipticCurve M = E.minimal_at(p);
    if (mod_long(M.discriminant(), p) != 0) return ReductionType::good;
    long a = mod_long(M.A(), p);
    if (a == 0) return ReductionType::additive;
    long b = mod_long(M.B(), p);
    // Singular abscissa x0 = -3B / (2A); the tangent cone is y^2 = 3 x0 (x - x0)^2.
    long inv2a = powmod(2 * a % p, p - 2, p);
    long x0 = static_cast<long>((static_cast<long long>(p - (3 * b) % p) % p) * inv2a % p);
    return is_square_mod(3 * x0 % p, p) ? ReductionType::mult_split : ReductionType::mult_nonsplit;
}

long ap_count(const EllipticCurve& E, long p)
{
    require_prime(p);
    if (mod_long(E.discriminant(), p) == 0) throw DomainError("ap_count: bad reduction at p = " + std::to_string(p));
    // chi[v] = Legendre symbol (v / p).
    std::vector<signed char> chi(static_cast<std::size_t>(p), -1);
    chi[0] = 0;
    for (long t = 1; t < p; ++t) chi[static_cast<std::size_t>(static_cast<long long>(t) * t % p)] = 1;
    const long long a = mod_long(E.A(), p), b = mod_long(E.B(), p);
    long sum = 0;
    for (long long x = 0; x < p; ++x) {
        long long v = ((x * x % p) * x + a * x + b) % p;
        sum += chi[static_cast<std::size_t>(v)];
    }
    long ap = -sum;
    if (static_cast<double>(ap) * ap > 4.0 * static_cast<double>(p)) throw InternalError("ap_count: Hasse bound violated");
    return ap;
}

bool is_supersingular(const EllipticCurve& E, long p)
{
    if (p < 5) throw DomainError("is_supersingular: p must be >= 5");
    return ap_count(E, p) == 0;
}

bool lutz_nagell_screen(const EllipticCurve& E, const EcPoint& P)
{
    check_on_curve(E, P);
    if (P.infinity) return true;
    if (P.x.get_den() != 1 || P.y.get_den() != 1) return false;
    if (P.y == 0) return true;
    Integer D = 4 * E.A() * E.A() * E.A() + 27 * E.B() * E.B();
    Integer y2 = P.y.get_num() * P.y.get_num();
    return mpz_divisible_p(D.get_mpz_t(), y2.get_mpz_t()) != 0;
}

std::optional<long> is_torsion(const EllipticCurve& E, const EcPoint& P)
{
    check_on_curve(E, P);
    if (P.infinity) return 1;
    EcPoint Q = P;
    for (long n = 2; n <= kTorsionSearchBound; ++n) {
        // Every multiple of a torsion point is torsion, so each must pass the screen.
        if (!lutz_nagell_screen(E, Q)) return std::nullopt;
        Q = ec_add(E, Q, P);
        if (Q.infinity) return n;
    }
    return std::nullopt;
}

IntPolynomial division_polynomial(const EllipticCurve& E, long n)
{
    if (n < 0) throw ValidationError("division_polynomial: n must be >= 0");
    const Integer& A = E.A();
    const Integer& B = E.B();
    std::vector<IntPolynomial> f;
    f.push_back(IntPolynomial());
    f.push_back(IntPolynomial::constant(1));
    f.push_back(IntPolynomial::constant(1));
    f.push_back(IntPolynomial{-A * A, 12 * B, 6 * A, 0, 3});
    f.push_back(IntPolynomial{-2 * (8 * B * B + A * A * A), -8 * A * B, -10 * A * A, 40 * B, 10 * A, 0, 2});
    const IntPolynomial R{B, A, 0, 1};
    const IntPolynomial R16 = IntPolynomial::constant(16) * R * R;
    auto cube = [](const IntPolynomial& g) { return g * g * g; };
    for (long k = 5; k <= n; ++k) {
        const std::size_t m = static_cast<std::size_t>(k / 2);
        IntPolynomial next;
        if (k % 2 == 1) {
            if (m % 2 == 0) next = R16 * f[m + 2] * cube(f[m]) - f[m - 1] * cube(f[m + 1]);
            else next = f[m + 2] * cube(f[m]) - R16 * f[m - 1] * cube(f[m + 1]);
        } else {
            next = f[m] * (f[m + 2] * f[m - 1] * f[m - 1] - f[m - 2] * f[m + 1] * f[m + 1]);
        }
        f.push_back(std::move(next));
    }
    return f[static_cast<std::size_t>(n)];
}

}  // namespace heightlab
