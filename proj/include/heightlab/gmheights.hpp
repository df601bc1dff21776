#pragma once

#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "heightlab/numkernel.hpp"

namespace heightlab {

// A height value with a rigorous-ish error bar from the root boxes.
struct HeightValue {
    double value = 0.0;
    double error = 0.0;
};

// coefficient * log(argument), argument >= 1.  Used wherever a height is known
// in closed form.
struct LogMultiple {
    Rational coefficient{0};
    Integer argument{1};

    double value() const;
    std::string to_string() const;
};

// Weil height of a nonzero rational: log max(|num|, |den|), in closed form.
LogMultiple rational_height(const Rational& q);

/// An algebraic number given by its minimal polynomial and a chosen root.
///
/// The polynomial is kept primitive with positive leading coefficient.  All
/// certified roots are computed once at construction; root_index selects the
/// conjugate this object stands for.
class AlgebraicNumber {
public:
    // Trusts that minpoly is irreducible; the named constructors below check it.
    AlgebraicNumber(IntPolynomial minpoly, std::size_t root_index);
    // Picks the root closest to `approx`.
    static AlgebraicNumber from_minpoly(IntPolynomial minpoly, std::complex<double> approx);

    static AlgebraicNumber rational(const Rational& q);
    // zeta_n^k with gcd(k, n) = 1 after reduction.
    static AlgebraicNumber root_of_unity(long n, long k = 1);
    // The k-th root of a: real root when one exists (positive for a > 0),
    // otherwise |a|^{1/k} e^{i pi / k}.  X^k - a must be irreducible.
    static AlgebraicNumber radical(const Rational& a, long k);

    const IntPolynomial& minpoly() const { return minpoly_; }
    std::size_t degree() const { return minpoly_.degree(); }
    std::size_t root_index() const { return root_index_; }
    const std::vector<RootBox>& conjugates() const { return roots_; }
    std::complex<double> approx() const { return roots_[root_index_].center; }
    // The same minimal polynomial with another root selected.
    AlgebraicNumber conjugate(std::size_t index) const;

    std::optional<Rational> as_rational() const;
    // Norm to Q: product of all conjugates.
    Rational norm() const;

private:
    IntPolynomial minpoly_;
    std::size_t root_index_;
    std::vector<RootBox> roots_;
};

HeightValue weil_height(const AlgebraicNumber& alpha);

// Order n when alpha is a root of unity.
std::optional<long> is_root_of_unity(const AlgebraicNumber& alpha);

// Order when every root of the monic rational polynomial f is a root of unity
// and f is a power of a single cyclotomic polynomial.
std::optional<long> cyclotomic_order(const RatPolynomial& f);

/// zeta_{p^r}^u * a^{m / p^s}, an element of the p-saturation of <a>.
///
/// Stored in canonical form: m / p^s in lowest terms, u reduced mod p^r and
/// r lowered while p | u.  a^{m/p^s} means the real p^s-th root of a^m.
class SatElement {
public:
    SatElement(long u, int r, long m, int s, Rational a, long p);

    long u() const { return u_; }
    int r() const { return r_; }
    long m() const { return m_; }
    int s() const { return s_; }
    const Rational& base() const { return a_; }
    long prime() const { return p_; }

    // (|m| / p^s) * h(a), exactly.
    LogMultiple exact_height() const;
    // Smallest (r', s') with r' >= s' such that the element lies in K_{r',s'}.
    std::pair<int, int> minimal_level() const;

    SatElement operator*(const SatElement& other) const;
    SatElement pow(long k) const;
    bool operator==(const SatElement&) const = default;

    std::string to_string() const;

private:
    long u_;
    int r_;
    long m_;
    int s_;
    Rational a_;
    long p_;
};

struct SatRealization {
    AlgebraicNumber number;
    LogMultiple exact_height;
};

SatRealization sat_element_realize(const SatElement& e);

struct SatVerdict {
    enum class Kind { member, non_member, inconclusive };
    enum class Certificate { none, exact_quotient, valuation, height };

    Kind kind = Kind::inconclusive;
    Certificate certificate = Certificate::none;
    long n = 0;            // alpha^n * a^{-m} is a root of unity ...
    Integer m{0};
    long root_order = 0;  // ... of this order
    std::string detail;
};

const char* to_string(SatVerdict::Kind k);
const char* to_string(SatVerdict::Certificate c);

// Decides whether alpha^n lies in <a> for some n >= 1 with n, |m| <= bound.
SatVerdict sat_membership(const AlgebraicNumber& alpha, const Rational& a, long bound);

}  // namespace heightlab
