#include "heightlab/padics.hpp"

#include <algorithm>
#include <vector>

#include "heightlab/errors.hpp"

namespace heightlab {

namespace {

Integer power_of(long p, long e) { return ipow(Integer(p), static_cast<unsigned long>(e)); }

Integer mod_pos(const Integer& x, const Integer& m)
{
    Integer r;
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

Integer inverse_mod(const Integer& x, const Integer& m)
{
    Integer r;
    if (mpz_invert(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t()) == 0) throw DomainError("inverse_mod: not invertible");
    return r;
}

// Integer x known modulo p^absolute as a p-adic number.
PadicNumber from_residue(const Integer& x, long p, long absolute)
{
    Integer m = power_of(p, absolute);
    Integer r = mod_pos(x, m);
    if (r == 0) return PadicNumber::zero(p, absolute);
    long v = valuation(r, Integer(p));
    Integer unit = r / power_of(p, v);
    return PadicNumber(p, v, unit, absolute - v);
}

void require_prime(long p)
{
    if (p < 2 || !is_prime(p)) throw ValidationError("p must be prime, got " + std::to_string(p));
}

void require_odd_prime(long p)
{
    if (p < 3 || !is_prime(p)) throw ValidationError("p must be an odd prime, got " + std::to_string(p));
}

}  // namespace

std::optional<long> vp(const Rational& x, long p)
{
    require_prime(p);
    if (x == 0) return std::nullopt;
    const Integer q(p);
    long v = 0;
    if (mpz_divisible_p(x.get_num_mpz_t(), q.get_mpz_t())) v += valuation(x.get_num(), q);
    if (mpz_divisible_p(x.get_den_mpz_t(), q.get_mpz_t())) v -= valuation(x.get_den(), q);
    return v;
}

// ---------------------------------------------------------------------------

PadicNumber PadicNumber::zero(long p, long absolute_precision)
{
    PadicNumber z;
    z.p_ = p;
    z.zero_ = true;
    z.precision_ = absolute_precision;
    return z;
}

PadicNumber::PadicNumber(long p, long valuation, Integer unit, long precision)
    : p_(p), zero_(false), valuation_(valuation), precision_(precision)
{
    if (precision_ < 1) throw PrecisionError("p-adic number with no significant digits");
    unit_ = mod_pos(unit, power_of(p_, precision_));
    if (mpz_divisible_ui_p(unit_.get_mpz_t(), static_cast<unsigned long>(p_))) throw ValidationError("p-adic unit part divisible by p");
}

PadicNumber PadicNumber::from_rational(const Rational& x, long p, long precision)
{
    require_prime(p);
    if (precision < 1) throw ValidationError("p-adic precision must be positive");
    if (x == 0) return zero(p, precision);
    long v = *vp(x, p);
    Rational u = x / rpow(Rational(p), v);
    Integer m = power_of(p, precision);
    Integer unit = mod_pos(Integer(u.get_num() * inverse_mod(mod_pos(u.get_den(), m), m)), m);
    return PadicNumber(p, v, unit, precision);
}

Integer PadicNumber::lift() const
{
    if (zero_) return 0;
    if (valuation_ < 0) throw DomainError("lift: value is not integral");
    return unit_ * power_of(p_, valuation_);
}

Rational PadicNumber::approximation() const
{
    if (zero_) return 0;
    return Rational(unit_) * rpow(Rational(p_), valuation_);
}

PadicNumber PadicNumber::operator*(const PadicNumber& o) const
{
    if (p_ != o.p_) throw ValidationError("p-adic operands over different primes");
    if (zero_ || o.zero_) {
        long abs_prec = zero_ ? precision_ + (o.zero_ ? o.precision_ : o.valuation_) : precision_ + valuation_ + o.precision_;
        return zero(p_, abs_prec);
    }
    long prec = std::min(precision_, o.precision_);
    return PadicNumber(p_, valuation_ + o.valuation_, unit_ * o.unit_, prec);
}

PadicNumber PadicNumber::operator+(const PadicNumber& o) const
{
    if (p_ != o.p_) throw ValidationError("p-adic operands over different primes");
    long abs_a = zero_ ? precision_ : valuation_ + precision_;
    long abs_b = o.zero_ ? o.precision_ : o.valuation_ + o.precision_;
    long abs_prec = std::min(abs_a, abs_b);
    if (zero_ && o.zero_) return zero(p_, abs_prec);
    long v = std::min(zero_ ? abs_prec : valuation_, o.zero_ ? abs_prec : o.valuation_);
    Integer sum = 0;
    if (!zero_) sum += unit_ * power_of(p_, valuation_ - v);
    if (!o.zero_) sum += o.unit_ * power_of(p_, o.valuation_ - v);
    if (abs_prec <= v) return zero(p_, abs_prec);
    PadicNumber r = from_residue(sum, p_, abs_prec - v);
    if (r.zero_) return zero(p_, abs_prec);
    r.valuation_ += v;
    return r;
}

PadicNumber PadicNumber::operator-() const
{
    if (zero_) return *this;
    return PadicNumber(p_, valuation_, Integer(-unit_), precision_);
}

PadicNumber PadicNumber::inverse() const
{
    if (zero_) throw DomainError("inverse of p-adic zero");
    Integer m = power_of(p_, precision_);
    return PadicNumber(p_, -valuation_, inverse_mod(unit_, m), precision_);
}

PadicNumber PadicNumber::pow(unsigned long e) const
{
    PadicNumber result = from_rational(1, p_, zero_ ? precision_ : precision_);
    PadicNumber base = *this;
    while (e > 0) {
        if (e & 1UL) result = result * base;
        base = base * base;
        e >>= 1;
    }
    return result;
}

bool PadicNumber::equals(const PadicNumber& o) const { return (*this - o).is_zero(); }

std::string PadicNumber::to_string() const
{
    if (zero_) return "O(" + std::to_string(p_) + "^" + std::to_string(precision_) + ")";
    return std::to_string(p_) + "^" + std::to_string(valuation_) + " * " + unit_.get_str() + " + O(" + std::to_string(p_) + "^" +
           std::to_string(valuation_ + precision_) + ")";
}

// ---------------------------------------------------------------------------

bool is_pth_power(const Rational& a, long p)
{
    require_odd_prime(p);
    if (a == 0) throw ValidationError("is_pth_power: a must be nonzero");
    return is_pth_power(PadicNumber::from_rational(a, p, 2));
}

bool is_pth_power(const PadicNumber& a)
{
    const long p = a.prime();
    require_odd_prime(p);
    if (a.is_zero()) throw ValidationError("is_pth_power: a must be nonzero");
    if (a.precision() < 2) throw PrecisionError("is_pth_power: needs the unit modulo p^2");
    if (a.valuation() % p != 0) return false;
    Integer m = power_of(p, 2);
    Integer t;
    Integer e(p - 1);
    mpz_powm(t.get_mpz_t(), a.unit().get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return t == 1;
}

namespace {

// The unique p-th root in Q_p of a p-th power (p odd).
PadicNumber pth_root(const PadicNumber& a)
{
    const long p = a.prime();
    const long prec = a.precision();
    IntPolynomial f = IntPolynomial::monomial(static_cast<std::size_t>(p)) - IntPolynomial::constant(a.unit());
    PadicNumber unit_root = hensel_root(f, std::nullopt, p, prec - 1);
    return PadicNumber(p, a.valuation() / p, unit_root.unit(), prec - 1);
}

}  // namespace

LambdaResult lambda_exponent(const Rational& a, long p, long precision)
{
    require_odd_prime(p);
    if (a == 0 || a == 1 || a == -1) throw ValidationError("lambda_exponent: a must not be 0 or +-1");
    LambdaResult out{0, PadicNumber::from_rational(a, p, precision)};
    while (true) {
        if (out.b.precision() < 2)
            throw PrecisionError("lambda_exponent: precision " + std::to_string(precision) + " exhausted after " +
                                 std::to_string(out.lambda) + " root extractions; need N >= " + std::to_string(precision + 2));
        if (!is_pth_power(out.b)) return out;
        out.b = pth_root(out.b);
        ++out.lambda;
    }
}

PadicNumber hensel_root(const IntPolynomial& f, std::optional<Integer> seed, long p, long precision)
{
    require_prime(p);
    if (precision < 1) throw ValidationError("hensel_root: precision must be positive");
    if (f.is_zero() || f.degree() == 0) throw ValidationError("hensel_root: polynomial must be nonconstant");
    const IntPolynomial df = f.derivative();
    const Integer P(p);

    // Returns v(f'(x)) when x satisfies the strong Hensel condition.
    auto admissible = [&](const Integer& x) -> std::optional<long> {
        Integer fx = f.evaluate(Rational(x)).get_num();
        Integer dfx = df.evaluate(Rational(x)).get_num();
        if (dfx == 0) return std::nullopt;
        long e = valuation(dfx, P);
        if (fx == 0 || valuation(fx, P) > 2 * e) return e;
        return std::nullopt;
    };

    Integer x;
    long e = 0;
    if (seed) {
        auto ok = admissible(*seed);
        if (!ok) throw NoRootError("hensel_root: seed " + seed->get_str() + " fails v(f) > 2 v(f')");
        x = *seed;
        e = *ok;
    } else {
        // Residues mod p^k that are roots mod p^k, refined one digit at a time.
        std::vector<Integer> candidates{Integer(0)};
        Integer modulus = 1;
        bool found = false;
        const long max_level = std::max<long>(2 * precision, 8);
        for (long k = 1; k <= max_level && !found; ++k) {
            std::vector<Integer> next;
            Integer new_mod = modulus * P;
            for (const auto& c : candidates) {
                for (long d = 0; d < p; ++d) {
                    Integer y = c + modulus * d;
                    Integer fy = f.evaluate(Rational(y)).get_num();
                    if (mpz_divisible_p(fy.get_mpz_t(), new_mod.get_mpz_t())) next.push_back(y);
                }
            }
            std::sort(next.begin(), next.end());
            for (const auto& y : next) {
                if (auto ok = admissible(y)) {
                    x = y;
                    e = *ok;
                    found = true;
                    break;
                }
            }
            if (next.empty()) break;
            if (next.size() > 100000) throw NoRootError("hensel_root: seed search exceeded its candidate bound");
            candidates = std::move(next);
            modulus = new_mod;
        }
        if (!found) throw NoRootError("hensel_root: no root of " + f.to_string() + " in Z_" + std::to_string(p));
    }

    const Integer work_mod = power_of(p, precision + 2 * e + 2);
    const Integer pe = power_of(p, e);
    for (int iter = 0; iter < 200; ++iter) {
        Integer fx = f.evaluate(Rational(x)).get_num();
        if (fx == 0 || valuation(fx, P) >= precision + e) return from_residue(x, p, precision);
        Integer dfx = df.evaluate(Rational(x)).get_num();
        Integer num = fx / pe;
        Integer den = dfx / pe;
        x = mod_pos(Integer(x - num * inverse_mod(mod_pos(den, work_mod), work_mod)), work_mod);
    }
    throw PrecisionError("hensel_root: Newton iteration did not converge");
}

// ---------------------------------------------------------------------------

TowerBase tower_base(const Rational& a, long p, long precision)
{
    auto lam = lambda_exponent(a, p, precision);
    TowerBase base;
    base.p = p;
    base.lambda = lam.lambda;
    base.b = lam.b;
    base.v_b = lam.b.valuation();
    if (lam.lambda == 0) base.exact = a;
    return base;
}

TowerElement::TowerElement(TowerBase base, int r, int s) : base_(std::move(base)), r_(r), s_(s)
{
    require_odd_prime(base_.p);
    if (r_ < 0 || s_ < 0 || r_ < s_) throw ValidationError("TowerElement: level must satisfy r >= s >= 0");
}

TowerElement TowerElement::constant(TowerBase base, int r, int s, const Rational& c)
{
    TowerElement x(std::move(base), r, s);
    x.add_term(c, 0, 0);
    return x;
}

TowerElement TowerElement::monomial(TowerBase base, int r, int s, const Rational& c, long u, long j)
{
    TowerElement x(std::move(base), r, s);
    x.add_term(c, u, j);
    return x;
}

void TowerElement::add_term(const Rational& c, long u, long j)
{
    const long pr = power_of(base_.p, r_).get_si();
    const long ps = power_of(base_.p, s_).get_si();
    if (j < 0 || j >= ps) throw ValidationError("TowerElement: beta exponent must lie in [0, p^s)");
    Monomial key{((u % pr) + pr) % pr, j};
    Rational& slot = terms_[key];
    slot += c;
    if (slot == 0) terms_.erase(key);
}

Rational TowerElement::term_valuation(const Monomial& mono, const Rational& c) const
{
    Rational v(*vp(c, base_.p));
    Rational beta(mono.j * base_.v_b, power_of(base_.p, s_));
    beta.canonicalize();
    return v + beta;
}

std::string TowerElement::to_string() const
{
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [mono, c] : terms_) {
        if (!out.empty()) out += " + ";
        out += c.get_str();
        if (mono.u) out += "*z^" + std::to_string(mono.u);
        if (mono.j) out += "*b^(" + std::to_string(mono.j) + "/" + power_of(base_.p, s_).get_str() + ")";
    }
    return out;
}

Rational tower_norm(const TowerElement& x)
{
    const long p = x.prime();
    const int r = x.r(), s = x.s();
    const long pr = power_of(p, r).get_si();
    const long ps = power_of(p, s).get_si();
    const std::size_t phi = r == 0 ? 1 : static_cast<std::size_t>(euler_phi(pr));
    const std::size_t d = phi * static_cast<std::size_t>(ps);
    const Rational b = x.base().exact ? *x.base().exact : x.base().b.approximation();

    // zeta^k reduced modulo Phi_{p^r}, k in [0, p^r).
    const RatPolynomial cyc = to_rational(cyclotomic(pr));
    std::vector<std::vector<Rational>> zeta_pow(static_cast<std::size_t>(pr), std::vector<Rational>(phi, Rational(0)));
    {
        RatPolynomial cur = RatPolynomial::constant(1);
        for (long k = 0; k < pr; ++k) {
            for (std::size_t i = 0; i < phi; ++i) zeta_pow[static_cast<std::size_t>(k)][i] = cur.coeff(i);
            cur = divmod(cur * RatPolynomial::monomial(1), cyc).second;
        }
    }

    // Column (i, j) holds the coordinates of x * zeta^i beta^j in the basis zeta^i' beta^j'.
    std::vector<std::vector<Rational>> m(d, std::vector<Rational>(d, Rational(0)));
    for (std::size_t i = 0; i < phi; ++i) {
        for (long j = 0; j < ps; ++j) {
            const std::size_t col = static_cast<std::size_t>(j) * phi + i;
            for (const auto& [mono, c] : x.terms()) {
                long jj = mono.j + j;
                Rational coeff = c;
                if (jj >= ps) {
                    jj -= ps;
                    coeff *= b;
                }
                long k = (mono.u + static_cast<long>(i)) % pr;
                const auto& red = zeta_pow[static_cast<std::size_t>(k)];
                for (std::size_t t = 0; t < phi; ++t) {
                    if (red[t] == 0) continue;
                    m[static_cast<std::size_t>(jj) * phi + t][col] += coeff * red[t];
                }
            }
        }
    }
    Integer l = 1;
    for (const auto& row : m)
        for (const auto& v : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    std::vector<std::vector<Integer>> im(d, std::vector<Integer>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) im[i][j] = Rational(m[i][j] * l).get_num();
    Rational det(determinant(std::move(im)));
    det /= Rational(ipow(l, static_cast<unsigned long>(d)));
    return det;
}

TowerAbs tower_abs(const TowerElement& x)
{
    TowerAbs out;
    if (x.is_zero()) {
        out.infinite = true;
        out.method = TowerAbs::Method::zero;
        return out;
    }
    std::optional<Rational> best;
    int ties = 0;
    for (const auto& [mono, c] : x.terms()) {
        Rational v = x.term_valuation(mono, c);
        if (!best || v < *best) {
            best = v;
            ties = 1;
        } else if (v == *best) {
            ++ties;
        }
    }
    if (ties == 1) {
        out.exponent = *best;
        return out;
    }

    const long p = x.prime();
    const long degree = x.r() == 0 ? 1 : (p - 1) * power_of(p, x.r() + x.s() - 1).get_si();
    if (degree > kNormFallbackMaxDegree)
        throw AmbiguityError("tower_abs: " + std::to_string(ties) + " terms tie at valuation " + best->get_str() +
                             " and the field degree " + std::to_string(degree) + " is too large for the norm fallback");
    Rational norm = tower_norm(x);
    if (norm == 0) {
        out.infinite = true;
        out.method = TowerAbs::Method::zero;
        return out;
    }
    long vn = *vp(norm, p);
    if (!x.base().exact && vn >= x.base().b.precision() / 2)
        throw AmbiguityError("tower_abs: norm valuation " + std::to_string(vn) + " exceeds the precision of b");
    out.exponent = Rational(vn, degree);
    out.exponent.canonicalize();
    out.method = TowerAbs::Method::norm;
    return out;
}

}  // namespace heightlab
