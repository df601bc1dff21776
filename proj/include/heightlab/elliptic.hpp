#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include "heightlab/numkernel.hpp"

namespace heightlab {

/// y^2 = x^3 + A x + B with integer A, B and nonzero discriminant.
class EllipticCurve {
public:
    EllipticCurve(Integer A, Integer B);

    const Integer& A() const { return A_; }
    const Integer& B() const { return B_; }
    // -16 (4A^3 + 27B^2)
    const Integer& discriminant() const { return disc_; }
    // y^2 - x^3 - A x - B
    Rational residual(const Rational& x, const Rational& y) const;
    bool contains(const Rational& x, const Rational& y) const { return residual(x, y) == 0; }
    // Divides A by u^4 and B by u^6 for the largest power u of p allowed.
    EllipticCurve minimal_at(long p) const;

    std::string to_string() const;

private:
    Integer A_, B_, disc_;
};

struct EcPoint {
    bool infinity = true;
    Rational x{0};
    Rational y{0};

    static EcPoint zero() { return EcPoint{}; }
    static EcPoint affine(Rational x, Rational y) { return EcPoint{false, std::move(x), std::move(y)}; }
    bool operator==(const EcPoint& o) const
    {
        return infinity == o.infinity && (infinity || (x == o.x && y == o.y));
    }
    std::string to_string() const;
};

// Throws ValidationError with the residual y^2 - x^3 - Ax - B when P is off E.
void check_on_curve(const EllipticCurve& E, const EcPoint& P);

EcPoint ec_neg(const EcPoint& P);
EcPoint ec_add(const EllipticCurve& E, const EcPoint& P, const EcPoint& Q);
EcPoint ec_mul(const EllipticCurve& E, const Integer& n, const EcPoint& P);

enum class ReductionType { good, mult_split, mult_nonsplit, additive };
const char* to_string(ReductionType t);

ReductionType reduction_type(const EllipticCurve& E, long p);

// a_p = p + 1 - #E(F_p) by counting with Legendre symbols.
long ap_count(const EllipticCurve& E, long p);
bool is_supersingular(const EllipticCurve& E, long p);

// Necessary condition for torsion: integral coordinates and y = 0 or y^2 | 4A^3 + 27B^2.
bool lutz_nagell_screen(const EllipticCurve& E, const EcPoint& P);

inline constexpr long kTorsionSearchBound = 16;

// Smallest n <= 16 with [n]P = O.
std::optional<long> is_torsion(const EllipticCurve& E, const EcPoint& P);

// f_n with f_n = psi_n for odd n and psi_n / (2y) for even n, so the roots of
// f_n (n odd) are the x-coordinates of the nonzero n-torsion points.
IntPolynomial division_polynomial(const EllipticCurve& E, long n);

// ---------------------------------------------------------------------------
// Truncated power series in up to three variables.

class Series {
public:
    using Exponent = std::array<int, 3>;

    explicit Series(int order = 0) : order_(order) {}
    static Series variable(int index, int order);
    static Series constant(const Rational& c, int order);

    int order() const { return order_; }
    const std::map<Exponent, Rational>& terms() const { return terms_; }
    Rational coeff(const Exponent& e) const;
    void add(const Exponent& e, const Rational& c);
    bool is_zero() const { return terms_.empty(); }
    int valuation() const;  // lowest total degree; order + 1 for zero

    Series operator+(const Series& o) const;
    Series operator-(const Series& o) const;
    Series operator*(const Series& o) const;
    Series operator*(const Rational& c) const;
    Series pow(int k) const;
    // 1 / s for s with constant term 1.
    Series reciprocal() const;
    // Replaces variable i by the given series; all of them must have zero constant term.
    Series substitute(const std::array<std::optional<Series>, 3>& images) const;

    std::string to_string() const;

private:
    int order_;
    std::map<Exponent, Rational> terms_;
};

struct FormalGroupData {
    int order = 0;
    Series w;        // w(t) = -1/y in t = -x/y
    Series law;      // F(t1, t2)
    Series inverse;  // i(t1)
};

FormalGroupData formal_group(const EllipticCurve& E, int order);

}  // namespace heightlab
