#include "heightlab/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "heightlab/errors.hpp"

namespace heightlab {

bool is_prime(const Integer& n)
{
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

bool is_prime(long n) { return is_prime(Integer(n)); }

namespace {

Integer pollard_rho(const Integer& n)
{
    if (mpz_even_p(n.get_mpz_t())) return 2;
    for (unsigned long c = 1;; ++c) {
        Integer x = 2, y = 2, d = 1;
        auto step = [&](const Integer& v) {
            Integer r = v * v + c;
            mpz_mod(r.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
            return r;
        };
        while (d == 1) {
            x = step(x);
            y = step(step(y));
            Integer diff = abs(x - y);
            mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        }
        if (d != n) return d;
    }
}

void factor_into(Integer n, std::map<Integer, unsigned>& out)
{
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    Integer d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace

std::vector<std::pair<Integer, unsigned>> factor(const Integer& n_in)
{
    if (n_in == 0) throw ValidationError("factor: zero has no factorisation");
    Integer n = abs(n_in);
    std::map<Integer, unsigned> found;
    for (unsigned long p = 2; p < 1000 && n > 1; ++p) {
        if (!is_prime(static_cast<long>(p))) continue;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            ++found[Integer(p)];
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        }
    }
    factor_into(n, found);
    return {found.begin(), found.end()};
}

std::vector<Integer> prime_divisors(const Integer& n)
{
    std::vector<Integer> out;
    for (auto& [p, e] : factor(n)) out.push_back(p);
    return out;
}

long valuation(const Integer& n, const Integer& p)
{
    if (n == 0) throw ValidationError("valuation of zero is infinite");
    if (p == 2) return static_cast<long>(mpz_scan1(n.get_mpz_t(), 0));
    // Square the divisor while it keeps dividing; cheap on very large n.
    long v = 0;
    Integer rest = n;
    std::vector<Integer> powers{p};
    while (mpz_divisible_p(rest.get_mpz_t(), powers.back().get_mpz_t())) {
        Integer next = powers.back() * powers.back();
        if (mpz_sizeinbase(next.get_mpz_t(), 2) > mpz_sizeinbase(rest.get_mpz_t(), 2) + 1) break;
        powers.push_back(next);
    }
    for (std::size_t i = powers.size(); i-- > 0;) {
        while (mpz_divisible_p(rest.get_mpz_t(), powers[i].get_mpz_t())) {
            mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), powers[i].get_mpz_t());
            v += 1L << i;
        }
    }
    return v;
}

long euler_phi(long n)
{
    long result = n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        result -= result / p;
    }
    if (n > 1) result -= result / n;
    return result;
}

std::vector<long> divisors(long n)
{
    std::vector<long> out;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        out.push_back(d);
        if (d != n / d) out.push_back(n / d);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<Integer> exact_root(const Integer& n, unsigned long k)
{
    if (k == 0) return std::nullopt;
    if (n < 0 && k % 2 == 0) return std::nullopt;
    Integer r;
    Integer m = abs(n);
    if (mpz_root(r.get_mpz_t(), m.get_mpz_t(), k) == 0) return std::nullopt;
    return n < 0 ? Integer(-r) : r;
}

std::optional<Rational> exact_root(const Rational& q, unsigned long k)
{
    auto num = exact_root(q.get_num(), k);
    auto den = exact_root(q.get_den(), k);
    if (!num || !den) return std::nullopt;
    Rational r(*num, *den);
    r.canonicalize();
    return r;
}

Integer ipow(const Integer& base, unsigned long e)
{
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

Rational rpow(const Rational& base, long e)
{
    if (e < 0) {
        if (base == 0) throw ValidationError("zero raised to a negative power");
        Rational inv = 1 / base;
        return rpow(inv, -e);
    }
    Rational r(ipow(base.get_num(), static_cast<unsigned long>(e)), ipow(base.get_den(), static_cast<unsigned long>(e)));
    r.canonicalize();
    return r;
}

double log_abs(const Integer& n)
{
    if (n == 0) throw ValidationError("log of zero");
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, n.get_mpz_t());
    return std::log(std::fabs(mant)) + static_cast<double>(exp2) * std::log(2.0);
}

// ---------------------------------------------------------------------------

RatPolynomial to_rational(const IntPolynomial& f)
{
    std::vector<Rational> v;
    v.reserve(f.coefficients().size());
    for (const auto& c : f.coefficients()) v.emplace_back(c);
    return RatPolynomial(std::move(v));
}

Integer content(const IntPolynomial& f)
{
    Integer g = 0;
    for (const auto& c : f.coefficients()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
}

IntPolynomial primitive_part(const IntPolynomial& f)
{
    if (f.is_zero()) return f;
    Integer g = content(f);
    if (f.leading() < 0) g = -g;
    std::vector<Integer> v;
    for (const auto& c : f.coefficients()) v.push_back(c / g);
    return IntPolynomial(std::move(v));
}

IntPolynomial primitive_part(const RatPolynomial& f)
{
    if (f.is_zero()) return {};
    Integer l = 1;
    for (const auto& c : f.coefficients()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    std::vector<Integer> v;
    for (const auto& c : f.coefficients()) {
        Rational s = c * l;
        v.push_back(s.get_num());
    }
    return primitive_part(IntPolynomial(std::move(v)));
}

std::pair<RatPolynomial, RatPolynomial> divmod(const RatPolynomial& a, const RatPolynomial& b)
{
    if (b.is_zero()) throw ValidationError("polynomial division by zero");
    if (a.is_zero() || a.degree() < b.degree()) return {RatPolynomial{}, a};
    std::vector<Rational> rem = a.coefficients();
    std::vector<Rational> quo(a.degree() - b.degree() + 1, Rational(0));
    const auto& bc = b.coefficients();
    const Rational lead = b.leading();
    for (std::size_t i = quo.size(); i-- > 0;) {
        Rational q = rem[i + b.degree()] / lead;
        if (q == 0) continue;
        quo[i] = q;
        for (std::size_t j = 0; j < bc.size(); ++j) rem[i + j] -= q * bc[j];
    }
    rem.resize(b.degree());
    return {RatPolynomial(std::move(quo)), RatPolynomial(std::move(rem))};
}

RatPolynomial monic_gcd(RatPolynomial a, RatPolynomial b)
{
    while (!b.is_zero()) {
        auto r = divmod(a, b).second;
        // Rescale the remainder to keep coefficient growth in check.
        if (!r.is_zero()) r = to_rational(primitive_part(r));
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    Rational l = a.leading();
    std::vector<Rational> v;
    for (const auto& c : a.coefficients()) v.push_back(c / l);
    return RatPolynomial(std::move(v));
}

bool divides(const RatPolynomial& d, const RatPolynomial& f) { return divmod(f, d).second.is_zero(); }

RatPolynomial power_of_x_mod(const Integer& e, const RatPolynomial& m)
{
    RatPolynomial result = divmod(RatPolynomial::constant(1), m).second;
    RatPolynomial base = divmod(RatPolynomial::monomial(1), m).second;
    std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        result = divmod(result * result, m).second;
        if (mpz_tstbit(e.get_mpz_t(), i)) result = divmod(result * base, m).second;
    }
    return result;
}

std::vector<std::pair<IntPolynomial, unsigned>> squarefree_decomposition(const IntPolynomial& f_in)
{
    std::vector<std::pair<IntPolynomial, unsigned>> out;
    if (f_in.is_zero() || f_in.degree() == 0) return out;
    RatPolynomial f = to_rational(primitive_part(f_in));
    RatPolynomial fp = f.derivative();
    RatPolynomial a = monic_gcd(f, fp);
    RatPolynomial b = divmod(f, a).first;
    RatPolynomial c = divmod(fp, a).first;
    RatPolynomial d = c - b.derivative();
    unsigned i = 1;
    while (b.degree() > 0) {
        RatPolynomial g = monic_gcd(b, d);
        if (g.degree() > 0) out.emplace_back(primitive_part(g), i);
        b = divmod(b, g).first;
        c = divmod(d, g).first;
        d = c - b.derivative();
        ++i;
    }
    return out;
}

IntPolynomial cyclotomic(long n)
{
    if (n < 1) throw ValidationError("cyclotomic: order must be positive");
    RatPolynomial f = RatPolynomial::monomial(static_cast<std::size_t>(n)) - RatPolynomial::constant(1);
    for (long d : divisors(n)) {
        if (d == n) continue;
        f = divmod(f, to_rational(cyclotomic(d))).first;
    }
    return primitive_part(f);
}

std::vector<Rational> power_sums(const RatPolynomial& f, std::size_t count)
{
    // Newton's identities for the monic normalisation of f.
    const std::size_t d = f.degree();
    std::vector<Rational> e(d + 1);  // e[k] = coefficient of X^{d-k} divided by leading
    for (std::size_t k = 0; k <= d; ++k) e[k] = f.coeff(d - k) / f.leading();
    std::vector<std::size_t> nonzero;
    for (std::size_t k = 1; k <= d; ++k)
        if (e[k] != 0) nonzero.push_back(k);
    std::vector<Rational> s(count + 1, Rational(0));
    for (std::size_t j = 1; j <= count; ++j) {
        Rational acc = 0;
        for (std::size_t k : nonzero) {
            if (k > j) break;
            if (k == j) acc += Rational(static_cast<unsigned long>(j)) * e[k];
            else acc += e[k] * s[j - k];
        }
        s[j] = -acc;
    }
    s.erase(s.begin());
    return s;
}

RatPolynomial from_power_sums(const std::vector<Rational>& sums, std::size_t d)
{
    if (sums.size() < d) throw ValidationError("from_power_sums: not enough power sums");
    // k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i, monic X^d - e1 X^{d-1} + ...
    std::vector<Rational> e(d + 1, Rational(0));
    e[0] = 1;
    for (std::size_t k = 1; k <= d; ++k) {
        Rational acc = 0;
        for (std::size_t i = 1; i <= k; ++i) {
            Rational term = e[k - i] * sums[i - 1];
            if (i % 2 == 1) acc += term;
            else acc -= term;
        }
        e[k] = acc / Rational(static_cast<unsigned long>(k));
    }
    std::vector<Rational> coeffs(d + 1);
    for (std::size_t k = 0; k <= d; ++k) coeffs[d - k] = (k % 2 == 0) ? e[k] : Rational(-e[k]);
    return RatPolynomial(std::move(coeffs));
}

Integer determinant(std::vector<std::vector<Integer>> m)
{
    const std::size_t n = m.size();
    if (n == 0) return 1;
    Integer sign = 1;
    Integer prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t swap = k + 1;
            while (swap < n && m[swap][k] == 0) ++swap;
            if (swap == n) return 0;
            std::swap(m[k], m[swap]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

bool capelli_irreducible(const Rational& a, long n)
{
    if (a == 0) throw ValidationError("capelli_irreducible: a must be nonzero");
    if (n < 1) throw ValidationError("capelli_irreducible: n must be positive");
    for (const auto& q : prime_divisors(Integer(n))) {
        if (exact_root(a, q.get_ui())) return false;
    }
    if (n % 4 == 0) {
        // X^4 + 4c^4 splits, so a = -4 c^4 is the one extra obstruction.
        Rational t = -a / 4;
        if (exact_root(t, 4)) return false;
    }
    return true;
}

}  // namespace heightlab
