#include "heightlab/gmheights.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "heightlab/errors.hpp"

namespace heightlab {

double LogMultiple::value() const
{
    if (coefficient == 0 || argument == 1) return 0.0;
    return coefficient.get_d() * log_abs(argument);
}

std::string LogMultiple::to_string() const
{
    if (coefficient == 0 || argument == 1) return "0";
    std::string c = coefficient == 1 ? "" : coefficient.get_str() + "*";
    return c + "log(" + argument.get_str() + ")";
}

LogMultiple rational_height(const Rational& q)
{
    if (q == 0) throw ValidationError("height of zero is undefined");
    Integer num = abs(q.get_num());
    const Integer& den = q.get_den();
    return LogMultiple{Rational(1), num > den ? num : den};
}

// ---------------------------------------------------------------------------

AlgebraicNumber::AlgebraicNumber(IntPolynomial minpoly, std::size_t root_index)
    : minpoly_(primitive_part(minpoly)), root_index_(root_index)
{
    if (minpoly_.is_zero() || minpoly_.degree() == 0) throw ValidationError("AlgebraicNumber: minimal polynomial must have degree >= 1");
    roots_ = poly_roots(minpoly_);
    if (root_index_ >= roots_.size()) throw ValidationError("AlgebraicNumber: root index out of range");
}

AlgebraicNumber AlgebraicNumber::from_minpoly(IntPolynomial minpoly, std::complex<double> approx)
{
    AlgebraicNumber a(std::move(minpoly), 0);
    std::size_t best = 0;
    for (std::size_t i = 1; i < a.roots_.size(); ++i)
        if (std::abs(a.roots_[i].center - approx) < std::abs(a.roots_[best].center - approx)) best = i;
    a.root_index_ = best;
    return a;
}

AlgebraicNumber AlgebraicNumber::rational(const Rational& q)
{
    return AlgebraicNumber(IntPolynomial{Integer(-q.get_num()), q.get_den()}, 0);
}

AlgebraicNumber AlgebraicNumber::root_of_unity(long n, long k)
{
    if (n < 1) throw ValidationError("root_of_unity: order must be positive");
    k = ((k % n) + n) % n;
    long g = std::gcd(k, n);
    if (g == 0) g = n;
    n /= g;
    k /= g;
    double ang = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    return from_minpoly(cyclotomic(n), std::polar(1.0, ang));
}

AlgebraicNumber AlgebraicNumber::radical(const Rational& a, long k)
{
    if (k < 1) throw ValidationError("radical: index must be positive");
    if (a == 0) throw ValidationError("radical: base must be nonzero");
    if (!capelli_irreducible(a, k)) throw ValidationError("radical: X^" + std::to_string(k) + " - " + a.get_str() + " is reducible");
    IntPolynomial f = primitive_part(RatPolynomial::monomial(static_cast<std::size_t>(k)) - RatPolynomial::constant(a));
    double mod = std::exp((log_abs(a.get_num()) - log_abs(a.get_den())) / static_cast<double>(k));
    std::complex<double> target;
    if (a > 0) target = mod;
    else if (k % 2 == 1) target = -mod;
    else target = std::polar(mod, std::numbers::pi / static_cast<double>(k));
    return from_minpoly(std::move(f), target);
}

AlgebraicNumber AlgebraicNumber::conjugate(std::size_t index) const
{
    if (index >= roots_.size()) throw ValidationError("conjugate: index out of range");
    AlgebraicNumber out = *this;
    out.root_index_ = index;
    return out;
}

std::optional<Rational> AlgebraicNumber::as_rational() const
{
    if (degree() != 1) return std::nullopt;
    Rational r(-minpoly_.coeff(0), minpoly_.coeff(1));
    r.canonicalize();
    return r;
}

Rational AlgebraicNumber::norm() const
{
    Rational n(minpoly_.coeff(0), minpoly_.leading());
    n.canonicalize();
    return degree() % 2 == 0 ? n : Rational(-n);
}

HeightValue weil_height(const AlgebraicNumber& alpha)
{
    const auto& f = alpha.minpoly();
    double sum = log_abs(f.leading());
    double err = 0.0;
    for (const auto& box : alpha.conjugates()) {
        double mod = std::abs(box.center);
        double mid = std::log(std::max(1.0, mod));
        double hi = std::log(std::max(1.0, mod + box.radius));
        double lo = std::log(std::max(1.0, mod - box.radius));
        sum += mid;
        err += std::max(hi - mid, mid - lo);
    }
    const double d = static_cast<double>(alpha.degree());
    double value = sum / d;
    // Floating point summation error on top of the box widths.
    err = err / d + 4.0 * std::numeric_limits<double>::epsilon() * (std::fabs(sum) / d + 1.0);
    if (value < 0.0) value = 0.0;
    return {value, err};
}

std::optional<long> is_root_of_unity(const AlgebraicNumber& alpha)
{
    auto h = weil_height(alpha);
    if (h.value > h.error + 1e-9) return std::nullopt;
    const long d = static_cast<long>(alpha.degree());
    const RatPolynomial f = to_rational(alpha.minpoly());
    for (long n = 1; n <= 2 * d * d + 2; ++n) {
        if (euler_phi(n) != d) continue;
        RatPolynomial xn = RatPolynomial::monomial(static_cast<std::size_t>(n)) - RatPolynomial::constant(1);
        if (divides(f, xn)) return n;
    }
    return std::nullopt;
}

std::optional<long> cyclotomic_order(const RatPolynomial& f)
{
    if (f.is_zero() || f.degree() == 0) return std::nullopt;
    RatPolynomial g = monic_gcd(f, f.derivative());
    RatPolynomial core = divmod(f, g).first;
    Rational lead = core.leading();
    std::vector<Rational> v;
    for (const auto& c : core.coefficients()) {
        Rational t = c / lead;
        if (t.get_den() != 1) return std::nullopt;
        v.push_back(t);
    }
    core = RatPolynomial(std::move(v));
    const long d = static_cast<long>(core.degree());
    long order = 0;
    for (long n = 1; n <= 2 * d * d + 2; ++n) {
        if (euler_phi(n) != d) continue;
        if (to_rational(cyclotomic(n)) == core) {
            order = n;
            break;
        }
    }
    if (order == 0) return std::nullopt;
    // f must be a pure power of the cyclotomic factor.
    if (f.degree() % core.degree() != 0) return std::nullopt;
    RatPolynomial power = RatPolynomial::constant(f.leading());
    for (std::size_t i = 0; i < f.degree() / core.degree(); ++i) power = power * core;
    if (!(power == f)) return std::nullopt;
    return order;
}

// ---------------------------------------------------------------------------

namespace {

long ipow_long(long base, int e)
{
    long r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

}  // namespace

SatElement::SatElement(long u, int r, long m, int s, Rational a, long p)
    : u_(u), r_(r), m_(m), s_(s), a_(std::move(a)), p_(p)
{
    if (p_ < 3 || !is_prime(p_)) throw ValidationError("SatElement: p must be an odd prime");
    if (r_ < 0 || s_ < 0) throw ValidationError("SatElement: r and s must be nonnegative");
    if (a_ == 0) throw ValidationError("SatElement: base must be nonzero");
    while (s_ > 0 && m_ % p_ == 0) {
        m_ /= p_;
        --s_;
    }
    if (m_ == 0) s_ = 0;
    long pr = ipow_long(p_, r_);
    u_ = ((u_ % pr) + pr) % pr;
    while (r_ > 0 && u_ % p_ == 0) {
        u_ /= p_;
        --r_;
    }
    if (r_ == 0) u_ = 0;
}

LogMultiple SatElement::exact_height() const
{
    LogMultiple h = rational_height(a_);
    Rational scale(std::labs(m_), ipow(Integer(p_), static_cast<unsigned long>(s_)));
    scale.canonicalize();
    h.coefficient *= scale;
    return h;
}

std::pair<int, int> SatElement::minimal_level() const { return {std::max(r_, s_), s_}; }

SatElement SatElement::operator*(const SatElement& o) const
{
    if (a_ != o.a_ || p_ != o.p_) throw ValidationError("SatElement product requires a common base and prime");
    int r = std::max(r_, o.r_);
    long u = u_ * ipow_long(p_, r - r_) + o.u_ * ipow_long(p_, r - o.r_);
    int s = std::max(s_, o.s_);
    long m = m_ * ipow_long(p_, s - s_) + o.m_ * ipow_long(p_, s - o.s_);
    return SatElement(u, r, m, s, a_, p_);
}

SatElement SatElement::pow(long k) const { return SatElement(u_ * k, r_, m_ * k, s_, a_, p_); }

std::string SatElement::to_string() const
{
    std::string out;
    if (r_ > 0) out += "zeta(" + std::to_string(ipow_long(p_, r_)) + ")^" + std::to_string(u_);
    if (m_ != 0) {
        if (!out.empty()) out += "*";
        out += "(" + a_.get_str() + ")^(" + std::to_string(m_);
        if (s_ > 0) out += "/" + std::to_string(ipow_long(p_, s_));
        out += ")";
    }
    return out.empty() ? "1" : out;
}

SatRealization sat_element_realize(const SatElement& e)
{
    const Rational& a = e.base();
    if (a == 0 || a == 1 || a == -1) throw ValidationError("sat_element_realize: base must not be 0 or +-1");
    const long p = e.prime();
    const long pr = ipow_long(p, e.r());
    const long ps = ipow_long(p, e.s());
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(e.u()) / static_cast<double>(pr);
    if (e.m() == 0) return {AlgebraicNumber::root_of_unity(pr, e.u()), e.exact_height()};

    const Rational c = rpow(a, e.m());
    if (e.s() > 0 && !capelli_irreducible(c, ps))
        throw ValidationError("sat_element_realize: " + c.get_str() + " is a p-th power; reduce the base first");

    // Real p^s-th root of c, times the root of unity.
    double mod = std::exp((log_abs(c.get_num()) - log_abs(c.get_den())) / static_cast<double>(ps));
    double real_root = c > 0 ? mod : -mod;
    std::complex<double> target = std::polar(1.0, ang) * real_root;

    IntPolynomial f;
    if (e.r() <= e.s()) {
        // alpha^{p^s} = c.
        f = primitive_part(RatPolynomial::monomial(static_cast<std::size_t>(ps)) - RatPolynomial::constant(c));
    } else {
        // alpha^{p^s} = zeta_{p^{r-s}}^u c: scaled cyclotomic in Y = X^{p^s}.
        const IntPolynomial cyc = cyclotomic(ipow_long(p, e.r() - e.s()));
        const std::size_t phi = cyc.degree();
        std::vector<Rational> coeffs(phi + 1);
        for (std::size_t i = 0; i <= phi; ++i) coeffs[i] = Rational(cyc.coeff(i)) * rpow(c, static_cast<long>(phi - i));
        f = primitive_part(RatPolynomial(std::move(coeffs)).inflate(static_cast<std::size_t>(ps)));
    }
    return {AlgebraicNumber::from_minpoly(std::move(f), target), e.exact_height()};
}

// ---------------------------------------------------------------------------

const char* to_string(SatVerdict::Kind k)
{
    switch (k) {
    case SatVerdict::Kind::member: return "member";
    case SatVerdict::Kind::non_member: return "non-member";
    case SatVerdict::Kind::inconclusive: return "inconclusive";
    }
    return "?";
}

const char* to_string(SatVerdict::Certificate c)
{
    switch (c) {
    case SatVerdict::Certificate::none: return "none";
    case SatVerdict::Certificate::exact_quotient: return "exact-quotient";
    case SatVerdict::Certificate::valuation: return "valuation";
    case SatVerdict::Certificate::height: return "height";
    }
    return "?";
}

namespace {

SatVerdict non_member(SatVerdict::Certificate cert, std::string detail)
{
    SatVerdict v;
    v.kind = SatVerdict::Kind::non_member;
    v.certificate = cert;
    v.detail = std::move(detail);
    return v;
}

long vq(const Rational& x, const Integer& q)
{
    long v = 0;
    if (mpz_divisible_p(x.get_num_mpz_t(), q.get_mpz_t())) v += valuation(x.get_num(), q);
    if (mpz_divisible_p(x.get_den_mpz_t(), q.get_mpz_t())) v -= valuation(x.get_den(), q);
    return v;
}

constexpr std::size_t kPowerSumLimit = 200000;

}  // namespace

SatVerdict sat_membership(const AlgebraicNumber& alpha, const Rational& a, long bound)
{
    if (a == 0 || a == 1 || a == -1) throw ValidationError("sat_membership: base must not be 0 or +-1");
    if (bound < 1) throw ValidationError("sat_membership: search bound must be >= 1");
    if (alpha.minpoly().coeff(0) == 0) return non_member(SatVerdict::Certificate::valuation, "alpha = 0");

    const Rational norm = alpha.norm();
    const long d = static_cast<long>(alpha.degree());

    // alpha^n = zeta a^m forces n v_q(N(alpha)) = m d v_q(a) at every prime q.
    std::vector<Integer> primes = prime_divisors(a.get_num() * a.get_den());
    std::optional<Rational> ratio;
    Rational residual = norm;
    for (const auto& q : primes) {
        long vn = vq(norm, q);
        long va = vq(a, q);
        Rational r(vn, d * va);
        r.canonicalize();
        if (ratio && *ratio != r)
            return non_member(SatVerdict::Certificate::valuation, "valuation ratios disagree at prime " + q.get_str());
        ratio = r;
        residual /= rpow(Rational(q), vn);
    }
    if (residual != 1 && residual != -1) {
        Integer witness = residual.get_num() * residual.get_den();
        return non_member(SatVerdict::Certificate::valuation,
                          "norm has a prime factor outside a (cofactor " + Integer(abs(witness)).get_str() + ")");
    }
    const Integer m0 = ratio->get_num();
    const Integer n0 = ratio->get_den();

    const HeightValue h = weil_height(alpha);
    const double expected = std::fabs(ratio->get_d()) * rational_height(a).value();
    if (std::fabs(h.value - expected) > 1e-9 + h.error)
        return non_member(SatVerdict::Certificate::height, "h(alpha) differs from |m/n| h(a) for the forced ratio " + ratio->get_str());

    SatVerdict inconclusive;
    inconclusive.kind = SatVerdict::Kind::inconclusive;
    if (n0 > bound || abs(m0) > bound) {
        inconclusive.detail = "forced ratio " + ratio->get_str() + " exceeds the search bound";
        return inconclusive;
    }
    const long n = n0.get_si();
    if (static_cast<std::size_t>(n) * static_cast<std::size_t>(d) > kPowerSumLimit) {
        inconclusive.detail = "quotient degree beyond kernel limits";
        return inconclusive;
    }

    // Characteristic polynomial of gamma = alpha^n a^{-m} from power sums.
    const RatPolynomial f = to_rational(alpha.minpoly());
    auto sums = power_sums(f, static_cast<std::size_t>(n * d));
    std::vector<Rational> gamma_sums(static_cast<std::size_t>(d));
    for (long k = 1; k <= d; ++k) gamma_sums[static_cast<std::size_t>(k - 1)] = sums[static_cast<std::size_t>(k * n - 1)];
    RatPolynomial charpoly = from_power_sums(gamma_sums, static_cast<std::size_t>(d));
    const Rational scale = rpow(a, -m0.get_si());
    std::vector<Rational> scaled(static_cast<std::size_t>(d) + 1);
    for (long k = 0; k <= d; ++k) scaled[static_cast<std::size_t>(d - k)] = charpoly.coeff(static_cast<std::size_t>(d - k)) * rpow(scale, k);
    charpoly = RatPolynomial(std::move(scaled));

    if (auto order = cyclotomic_order(charpoly)) {
        SatVerdict v;
        v.kind = SatVerdict::Kind::member;
        v.certificate = SatVerdict::Certificate::exact_quotient;
        v.n = n;
        v.m = m0;
        v.root_order = *order;
        v.detail = "alpha^" + std::to_string(n) + " * a^(" + Integer(-m0).get_str() + ") has order " + std::to_string(*order);
        return v;
    }
    return non_member(SatVerdict::Certificate::exact_quotient,
                      "alpha^" + std::to_string(n) + " * a^(" + Integer(-m0).get_str() + ") is not a root of unity, so no power is");
}

}  // namespace heightlab
