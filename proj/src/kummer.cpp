#include "heightlab/kummer.hpp"

#include "heightlab/errors.hpp"

namespace heightlab {

namespace {

long lpow(long p, int e) { return ipow(Integer(p), static_cast<unsigned long>(e)).get_si(); }

void require_galois_level(const TowerLevel& lvl)
{
    if (lvl.r < lvl.s || lvl.s < 0) throw ValidationError("tower level needs r >= s >= 0, got " + lvl.to_string());
    if ((lvl.r == 0 && lvl.s == 0) || (lvl.r == 1 && lvl.s == 0))
        throw DomainError("G_{r,s} is not defined at level " + lvl.to_string());
}

}  // namespace

TowerLevel TowerLevel::make(long p, int r, int s, const Rational& a, long precision)
{
    if (p < 3 || !is_prime(p)) throw ValidationError("tower prime must be odd, got " + std::to_string(p));
    if (r < s || s < 0) throw ValidationError("tower level needs r >= s >= 0");
    auto lam = lambda_exponent(a, p, precision);
    TowerLevel lvl;
    lvl.p = p;
    lvl.r = r;
    lvl.s = s;
    lvl.a = a;
    lvl.lambda = lam.lambda;
    lvl.v_b = lam.b.valuation();
    lvl.p_divides_vb = lvl.v_b % p == 0;
    return lvl;
}

TowerLevel TowerLevel::at(int r2, int s2) const
{
    TowerLevel out = *this;
    out.r = r2;
    out.s = s2;
    return out;
}

std::string TowerLevel::to_string() const
{
    return "(p=" + std::to_string(p) + ", r=" + std::to_string(r) + ", s=" + std::to_string(s) + ")";
}

long tower_degree(const TowerLevel& lvl)
{
    if (lvl.r < lvl.s || lvl.s < 0) throw ValidationError("tower level needs r >= s >= 0, got " + lvl.to_string());
    if (lvl.r == 0) throw DomainError("tower_degree: level (0,0) has no ramification degree");
    return (lvl.p - 1) * lpow(lvl.p, lvl.r + lvl.s - 1);
}

std::pair<int, int> subfield_rule(const TowerLevel& lvl)
{
    require_galois_level(lvl);
    const int r = lvl.r, s = lvl.s;
    if (lvl.p_divides_vb) {
        if (r > s) return {r - 1, s};
        return {r, s - 1};
    }
    if (r > s + 1) return {r - 1, s};
    return {r, s - 1};
}

long SigmaAction::shift(long u, long j) const
{
    long d = (u * (zeta_exponent - 1) + j * beta_multiplier) % modulus;
    return d < 0 ? d + modulus : d;
}

TowerElement SigmaAction::apply(const TowerElement& x) const
{
    TowerElement out(x.base(), x.r(), x.s());
    for (const auto& [mono, c] : x.terms()) out.add_term(c, mono.u + shift(mono.u, mono.j), mono.j);
    return out;
}

std::string SigmaAction::to_string() const
{
    std::string z = "zeta_" + std::to_string(modulus);
    if (kind == Kind::cyclotomic) return z + " -> " + z + "^" + std::to_string(zeta_exponent) + ", beta -> beta";
    return z + " -> " + z + ", beta -> " + z + "^" + std::to_string(beta_multiplier) + " * beta";
}

SigmaAction sigma_action(const TowerLevel& lvl)
{
    auto [r2, s2] = subfield_rule(lvl);
    SigmaAction act;
    act.modulus = lpow(lvl.p, lvl.r);
    const long step = lpow(lvl.p, lvl.r - 1);
    if (r2 == lvl.r - 1) {
        (void)s2;
        act.kind = SigmaAction::Kind::cyclotomic;
        act.zeta_exponent = 1 + step;
        act.beta_multiplier = 0;
    } else {
        // beta -> zeta_p beta with zeta_p = zeta_{p^r}^{p^{r-1}}.
        act.kind = SigmaAction::Kind::kummer;
        act.zeta_exponent = 1;
        act.beta_multiplier = step;
    }
    return act;
}

MetricGap metric_gap_check(const TowerLevel& lvl, const TowerElement& x)
{
    if (x.prime() != lvl.p || x.r() != lvl.r || x.s() != lvl.s)
        throw ValidationError("metric_gap_check: element does not live at level " + lvl.to_string());
    TowerAbs ax = tower_abs(x);
    if (!ax.infinite && ax.exponent < 0) throw DomainError("metric_gap_check: |x|_w > 1");
    const SigmaAction act = sigma_action(lvl);
    const Rational bound(1, lpow(lvl.p, 3));
    MetricGap gap;

    if (x.terms().size() == 1) {
        // sigma x - x = x (zeta^d - 1) and zeta^d has order p when d != 0.
        const auto& [mono, c] = *x.terms().begin();
        (void)c;
        if (act.shift(mono.u, mono.j) == 0) {
            gap.infinite = true;
            return gap;
        }
        gap.exponent = ax.exponent + Rational(1, lvl.p - 1);
        gap.exponent.canonicalize();
        gap.bound_ok = gap.exponent >= bound;
        return gap;
    }

    TowerElement diff = act.apply(x);
    for (const auto& [mono, c] : x.terms()) diff.add_term(-c, mono.u, mono.j);
    TowerAbs ad = tower_abs(diff);
    if (ad.infinite) {
        gap.infinite = true;
        return gap;
    }
    gap.exponent = ad.exponent;
    gap.bound_ok = gap.exponent >= bound;
    return gap;
}

bool amoroso_condition(const Rational& a, long p)
{
    if (a == 0 || a.get_den() != 1) throw ValidationError("amoroso_condition: a must be a nonzero integer");
    const Integer P(p);
    const Integer& n = a.get_num();
    if (mpz_divisible_p(n.get_mpz_t(), P.get_mpz_t())) return false;
    Integer t = ipow(n, static_cast<unsigned long>(p - 1)) - 1;
    return !mpz_divisible_p(t.get_mpz_t(), Integer(P * P).get_mpz_t());
}

}  // namespace heightlab
