#pragma once

#include <string>
#include <utility>

#include "heightlab/padics.hpp"

namespace heightlab {

/// A level (r, s) of the tower K_{r,s} = Q_p(zeta_{p^r}, b^{1/p^s}) attached to a.
struct TowerLevel {
    long p = 3;
    int r = 0;
    int s = 0;
    Rational a{2};
    long lambda = 0;
    long v_b = 0;
    bool p_divides_vb = true;

    // Fills lambda and v_b from lambda_exponent(a, p).
    static TowerLevel make(long p, int r, int s, const Rational& a, long precision = kDefaultPadicPrecision);
    TowerLevel at(int r2, int s2) const;
    std::string to_string() const;
};

long tower_degree(const TowerLevel& lvl);

// Level of the subfield fixed by G_{r,s}: (r-1, s) or (r, s-1).
std::pair<int, int> subfield_rule(const TowerLevel& lvl);

/// A generator of G_{r,s}: zeta -> zeta^zeta_exponent, beta -> zeta^beta_multiplier * beta,
/// where zeta = zeta_{p^r} and beta = b^{1/p^s}.
struct SigmaAction {
    enum class Kind { cyclotomic, kummer };
    Kind kind = Kind::cyclotomic;
    long modulus = 1;  // p^r
    long zeta_exponent = 1;
    long beta_multiplier = 0;

    // Exponent of zeta in sigma(zeta^u beta^j) / (zeta^u beta^j).
    long shift(long u, long j) const;
    TowerElement apply(const TowerElement& x) const;
    std::string to_string() const;
};

SigmaAction sigma_action(const TowerLevel& lvl);

struct MetricGap {
    bool infinite = false;  // sigma x = x
    Rational exponent{0};   // |sigma x - x|_w = p^{-exponent}
    bool bound_ok = true;   // exponent >= 1/p^3
};

MetricGap metric_gap_check(const TowerLevel& lvl, const TowerElement& x);

// p does not divide a and p^2 does not divide a^{p-1} - 1.
bool amoroso_condition(const Rational& a, long p);

}  // namespace heightlab
