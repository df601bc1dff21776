#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace heightlab {

using Integer = mpz_class;
using Rational = mpq_class;

// ---------------------------------------------------------------------------
// Integer helpers

bool is_prime(const Integer& n);
bool is_prime(long n);

// Prime factorisation of |n| (n != 0), primes ascending.
std::vector<std::pair<Integer, unsigned>> factor(const Integer& n);
std::vector<Integer> prime_divisors(const Integer& n);

// Exponent of the prime p in n; n must be nonzero.
long valuation(const Integer& n, const Integer& p);

long euler_phi(long n);
std::vector<long> divisors(long n);

// k-th root when n (resp. q) is a perfect k-th power in Z (resp. Q).
std::optional<Integer> exact_root(const Integer& n, unsigned long k);
std::optional<Rational> exact_root(const Rational& q, unsigned long k);

Integer ipow(const Integer& base, unsigned long e);
Rational rpow(const Rational& base, long e);

// Naive height of a rational: log max(|num|, |den|).
double log_abs(const Integer& n);

// ---------------------------------------------------------------------------
// Dense univariate polynomials, constant term first.

template <typename Coeff>
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Coeff> coeffs) : coeffs_(std::move(coeffs)) { trim(); }
    Polynomial(std::initializer_list<Coeff> coeffs) : coeffs_(coeffs) { trim(); }

    static Polynomial constant(const Coeff& c) { return Polynomial(std::vector<Coeff>{c}); }
    static Polynomial monomial(std::size_t degree, const Coeff& c = Coeff(1))
    {
        std::vector<Coeff> v(degree + 1, Coeff(0));
        v[degree] = c;
        return Polynomial(std::move(v));
    }

    bool is_zero() const { return coeffs_.empty(); }
    // Degree of the zero polynomial is reported as 0; check is_zero() first.
    std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
    const Coeff& leading() const { return coeffs_.back(); }
    Coeff coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Coeff(0); }
    const std::vector<Coeff>& coefficients() const { return coeffs_; }

    template <typename T>
    T evaluate(const T& x) const
    {
        T acc(0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + T(*it);
        return acc;
    }

    Polynomial derivative() const
    {
        if (coeffs_.size() <= 1) return {};
        std::vector<Coeff> d(coeffs_.size() - 1);
        for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * Coeff(static_cast<unsigned long>(i));
        return Polynomial(std::move(d));
    }

    // f(X^k)
    Polynomial inflate(std::size_t k) const
    {
        if (is_zero()) return {};
        std::vector<Coeff> v(degree() * k + 1, Coeff(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i) v[i * k] = coeffs_[i];
        return Polynomial(std::move(v));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b)
    {
        std::vector<Coeff> v(std::max(a.coeffs_.size(), b.coeffs_.size()), Coeff(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) v[i] += a.coeffs_[i];
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i) v[i] += b.coeffs_[i];
        return Polynomial(std::move(v));
    }
    friend Polynomial operator-(const Polynomial& a) { return a * Polynomial::constant(Coeff(-1)); }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Coeff> v(a.coeffs_.size() + b.coeffs_.size() - 1, Coeff(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i] == 0) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
        return Polynomial(std::move(v));
    }
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

    std::string to_string(const std::string& var = "X") const
    {
        if (is_zero()) return "0";
        std::string out;
        for (std::size_t i = coeffs_.size(); i-- > 0;) {
            const Coeff& c = coeffs_[i];
            if (c == 0) continue;
            std::string cs = c.get_str();
            bool neg = c < 0;
            if (neg) cs = cs.substr(1);
            if (!out.empty()) out += neg ? " - " : " + ";
            else if (neg) out += "-";
            if (i == 0) out += cs;
            else {
                if (cs != "1") out += cs + "*";
                out += var;
                if (i > 1) out += "^" + std::to_string(i);
            }
        }
        return out;
    }

private:
    void trim()
    {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }
    std::vector<Coeff> coeffs_;
};

using IntPolynomial = Polynomial<Integer>;
using RatPolynomial = Polynomial<Rational>;

RatPolynomial to_rational(const IntPolynomial& f);
// Primitive integer polynomial proportional to f with positive leading coefficient.
IntPolynomial primitive_part(const RatPolynomial& f);
IntPolynomial primitive_part(const IntPolynomial& f);
Integer content(const IntPolynomial& f);

// Euclidean division over Q; b must be nonzero.
std::pair<RatPolynomial, RatPolynomial> divmod(const RatPolynomial& a, const RatPolynomial& b);
RatPolynomial monic_gcd(RatPolynomial a, RatPolynomial b);
// Exact divisibility test over Q.
bool divides(const RatPolynomial& d, const RatPolynomial& f);
// X^e mod m, m nonzero.
RatPolynomial power_of_x_mod(const Integer& e, const RatPolynomial& m);

// Yun squarefree decomposition: pairs (primitive squarefree factor, multiplicity).
std::vector<std::pair<IntPolynomial, unsigned>> squarefree_decomposition(const IntPolynomial& f);

IntPolynomial cyclotomic(long n);

// Power sums s_1..s_count of the roots of f (with multiplicity).
std::vector<Rational> power_sums(const RatPolynomial& f, std::size_t count);
// Monic polynomial of degree d whose roots have power sums s_1..s_d.
RatPolynomial from_power_sums(const std::vector<Rational>& sums, std::size_t d);

// Exact determinant over Z (fraction-free Bareiss elimination).
Integer determinant(std::vector<std::vector<Integer>> m);

// ---------------------------------------------------------------------------
// Certified complex roots

struct RootBox {
    std::complex<double> center;
    double radius = 0.0;

    bool contains(std::complex<double> z) const { return std::abs(z - center) <= radius; }
};

// One box per root, repeated according to multiplicity.  Each box is certified
// to contain exactly one root of the squarefree factor it came from.
std::vector<RootBox> poly_roots(const IntPolynomial& f);

// Whether X^n - a is irreducible over Q (a != 0, n >= 1).
bool capelli_irreducible(const Rational& a, long n);

}  // namespace heightlab
