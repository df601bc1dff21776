#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "heightlab/numkernel.hpp"

namespace heightlab {

inline constexpr long kDefaultPadicPrecision = 60;

// v_p(x); std::nullopt stands for +infinity (x = 0).
std::optional<long> vp(const Rational& x, long p);

/// An element of Q_p: p^valuation * unit, the unit known modulo p^precision.
class PadicNumber {
public:
    static PadicNumber zero(long p, long absolute_precision);
    static PadicNumber from_rational(const Rational& x, long p, long precision = kDefaultPadicPrecision);
    // p^valuation * unit with unit coprime to p, reduced mod p^precision.
    PadicNumber(long p, long valuation, Integer unit, long precision);

    long prime() const { return p_; }
    bool is_zero() const { return zero_; }
    // Meaningless for zero; check is_zero() first.
    long valuation() const { return valuation_; }
    const Integer& unit() const { return unit_; }
    // Relative precision (digits of the unit); for zero, the absolute precision.
    long precision() const { return precision_; }
    // Integer congruent to the value modulo p^{valuation + precision}; the value must be integral.
    Integer lift() const;
    // Rational equal to the value up to its precision.
    Rational approximation() const;

    PadicNumber operator*(const PadicNumber& o) const;
    PadicNumber operator+(const PadicNumber& o) const;
    PadicNumber operator-() const;
    PadicNumber operator-(const PadicNumber& o) const { return *this + (-o); }
    PadicNumber inverse() const;
    PadicNumber pow(unsigned long e) const;
    // Agreement to the lesser of the two precisions.
    bool equals(const PadicNumber& o) const;

    std::string to_string() const;

    // Placeholder zero with no precision.
    PadicNumber() = default;

private:
    long p_ = 2;
    bool zero_ = true;
    long valuation_ = 0;
    Integer unit_{0};
    long precision_ = 0;
};

// a in (Q_p^*)^p for odd p: p | v_p(a) and u^{p-1} = 1 mod p^2 for the unit part u.
bool is_pth_power(const Rational& a, long p);
bool is_pth_power(const PadicNumber& a);

struct LambdaResult {
    long lambda = 0;
    PadicNumber b;  // b^{p^lambda} = a, b not a p-th power
};

LambdaResult lambda_exponent(const Rational& a, long p, long precision = kDefaultPadicPrecision);

// Root of f in Z_p to precision N.  Without a seed, residues mod p^k for
// growing k are searched for one satisfying v(f(x)) > 2 v(f'(x)).
PadicNumber hensel_root(const IntPolynomial& f, std::optional<Integer> seed, long p, long precision = kDefaultPadicPrecision);

// ---------------------------------------------------------------------------
// Elements of K_{r,s} = Q_p(zeta_{p^r}, b^{1/p^s}).

struct TowerBase {
    long p = 3;
    long lambda = 0;
    long v_b = 0;                   // v_p(b)
    PadicNumber b;                  // b^{p^lambda} = a
    std::optional<Rational> exact;  // b itself when it is rational (lambda = 0)
};

TowerBase tower_base(const Rational& a, long p, long precision = kDefaultPadicPrecision);

/// A finite sum of c * zeta_{p^r}^u * beta^j with beta = b^{1/p^s}.
class TowerElement {
public:
    struct Monomial {
        long u = 0;  // exponent of zeta_{p^r}, reduced mod p^r
        long j = 0;  // exponent of beta, 0 <= j < p^s
        auto operator<=>(const Monomial&) const = default;
    };

    TowerElement(TowerBase base, int r, int s);

    static TowerElement constant(TowerBase base, int r, int s, const Rational& c);
    static TowerElement monomial(TowerBase base, int r, int s, const Rational& c, long u, long j);

    void add_term(const Rational& c, long u, long j);

    const TowerBase& base() const { return base_; }
    long prime() const { return base_.p; }
    int r() const { return r_; }
    int s() const { return s_; }
    const std::map<Monomial, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    // Valuation of a single term, in units where v(p) = 1.
    Rational term_valuation(const Monomial& mono, const Rational& c) const;

    std::string to_string() const;

private:
    TowerBase base_;
    int r_;
    int s_;
    std::map<Monomial, Rational> terms_;
};

struct TowerAbs {
    enum class Method { zero, unique_minimum, norm };
    bool infinite = false;  // x = 0
    Rational exponent{0};   // |x|_w = p^{-exponent}
    Method method = Method::unique_minimum;
};

// Largest field degree for which the norm fallback is attempted.
inline constexpr long kNormFallbackMaxDegree = 60;

// |x|_w as a power of p.  Throws AmbiguityError when the minimal term
// valuations tie and the norm fallback is out of reach.
TowerAbs tower_abs(const TowerElement& x);

// Norm of x from K_{r,s} down to Q_p, evaluated exactly with b replaced by
// its rational approximation.  Exposed for tests.
Rational tower_norm(const TowerElement& x);

}  // namespace heightlab
