// Aberth-Ehrlich root isolation with a posteriori inclusion disks.
//
// Approximations z_i are certified with the Braess-Hadeler inclusion: the
// disks D(z_i, n |W_i|), W_i = f(z_i) / (lc * prod_{j != i} (z_i - z_j)),
// cover all roots and every connected union of k disks holds exactly k roots.
// Disjoint disks therefore isolate one root each.  f(z_i) is enlarged by a
// rigorous Horner rounding bound before the radius is formed.

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "heightlab/errors.hpp"
#include "heightlab/numkernel.hpp"

namespace heightlab {

namespace {

using boost::multiprecision::cpp_bin_float_50;

template <typename R>
struct Cx {
    R re{0};
    R im{0};

    friend Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
    friend Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
    friend Cx operator*(const Cx& a, const Cx& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
    friend Cx operator/(const Cx& a, const Cx& b)
    {
        R d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
};

template <typename R>
R modulus(const Cx<R>& z)
{
    using std::sqrt;
    using boost::multiprecision::sqrt;
    using std::abs;
    using boost::multiprecision::abs;
    R a = abs(z.re), b = abs(z.im);
    if (a < b) std::swap(a, b);
    if (a == 0) return R(0);
    R t = b / a;
    return a * sqrt(R(1) + t * t);
}

template <typename R>
R to_real(const Integer& n)
{
    using std::ldexp;
    using boost::multiprecision::ldexp;
    if (n == 0) return R(0);
    Integer m = abs(n);
    long bits = static_cast<long>(mpz_sizeinbase(m.get_mpz_t(), 2));
    long shift = bits > 192 ? bits - 192 : 0;
    Integer top = m >> static_cast<mp_bitcnt_t>(shift);
    R acc(0);
    // Accumulate 32-bit chunks from the most significant end.
    long chunks = (static_cast<long>(mpz_sizeinbase(top.get_mpz_t(), 2)) + 31) / 32;
    for (long c = chunks - 1; c >= 0; --c) {
        Integer chunk = (top >> static_cast<mp_bitcnt_t>(32 * c)) & Integer(0xffffffffUL);
        acc = acc * R(4294967296.0) + R(chunk.get_ui());
    }
    acc = ldexp(acc, static_cast<int>(shift));
    return n < 0 ? R(-acc) : acc;
}

template <typename R>
struct Workspace {
    std::vector<R> coeffs;      // rounded coefficients, constant first
    std::vector<R> abs_coeffs;  // |coeffs|
    R conversion_rel_error;     // relative error of coefficient conversion
};

template <typename R>
Workspace<R> make_workspace(const IntPolynomial& f)
{
    Workspace<R> w;
    for (const auto& c : f.coefficients()) {
        w.coeffs.push_back(to_real<R>(c));
        using std::abs;
        using boost::multiprecision::abs;
        w.abs_coeffs.push_back(abs(w.coeffs.back()));
    }
    using std::ldexp;
    using boost::multiprecision::ldexp;
    w.conversion_rel_error = std::numeric_limits<R>::epsilon() + ldexp(R(1), -180);
    return w;
}

template <typename R>
void horner(const std::vector<R>& c, const Cx<R>& z, Cx<R>& p, Cx<R>& dp)
{
    p = {c.back(), R(0)};
    dp = {R(0), R(0)};
    for (std::size_t k = c.size() - 1; k-- > 0;) {
        dp = dp * z + p;
        p = p * z + Cx<R>{c[k], R(0)};
    }
}

template <typename R>
bool aberth(const Workspace<R>& w, std::vector<Cx<R>>& z, int max_iter)
{
    using std::abs;
    using boost::multiprecision::abs;
    const std::size_t n = z.size();
    const R tol = std::numeric_limits<R>::epsilon() * R(16);
    std::vector<bool> done(n, false);
    for (int it = 0; it < max_iter; ++it) {
        bool all_done = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            Cx<R> p, dp;
            horner(w.coeffs, z[i], p, dp);
            if (p.re == 0 && p.im == 0) {
                done[i] = true;
                continue;
            }
            Cx<R> ratio = p / dp;
            Cx<R> s{R(0), R(0)};
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) s = s + Cx<R>{R(1), R(0)} / (z[i] - z[j]);
            Cx<R> step = ratio / (Cx<R>{R(1), R(0)} - ratio * s);
            z[i] = z[i] - step;
            R scale = modulus(z[i]);
            if (scale < R(1)) scale = R(1);
            if (modulus(step) <= tol * scale) done[i] = true;
            else all_done = false;
        }
        if (all_done) return true;
    }
    return false;
}

template <typename R>
std::optional<std::vector<RootBox>> certify(const Workspace<R>& w, const std::vector<Cx<R>>& z)
{
    using std::log;
    using boost::multiprecision::log;
    using std::exp;
    using boost::multiprecision::exp;
    const std::size_t n = z.size();
    const R u = std::numeric_limits<R>::epsilon();
    const R lead = w.abs_coeffs.back();
    std::vector<R> radius(n);
    for (std::size_t i = 0; i < n; ++i) {
        Cx<R> p, dp;
        horner(w.coeffs, z[i], p, dp);
        R mod = modulus(z[i]);
        R bound(0);
        for (std::size_t k = w.abs_coeffs.size(); k-- > 0;) bound = bound * mod + w.abs_coeffs[k];
        R err = (R(4 * n + 16) * u + w.conversion_rel_error * R(2)) * bound;
        R value = modulus(p) + err;
        R log_r = log(R(static_cast<double>(n))) + log(value) - log(lead);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            R sep = modulus(z[i] - z[j]);
            if (sep == 0) return std::nullopt;
            log_r -= log(sep);
        }
        radius[i] = exp(log_r) * (R(1) + R(1e-9));
    }
    const double limit = std::ldexp(1.0, -40);
    std::vector<RootBox> boxes(n);
    for (std::size_t i = 0; i < n; ++i) {
        double re = static_cast<double>(z[i].re);
        double im = static_cast<double>(z[i].im);
        double mod = std::hypot(re, im);
        double r = static_cast<double>(radius[i]);
        r = r * (1.0 + 1e-12) + (mod + 1e-300) * std::ldexp(1.0, -52);
        if (!(r <= limit * std::max(1.0, mod))) return std::nullopt;
        boxes[i] = RootBox{{re, im}, r};
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(boxes[i].center - boxes[j].center) <= boxes[i].radius + boxes[j].radius) return std::nullopt;
    return boxes;
}

template <typename R, typename S>
std::vector<Cx<R>> convert(const std::vector<Cx<S>>& z)
{
    std::vector<Cx<R>> out;
    for (const auto& v : z) out.push_back({R(v.re), R(v.im)});
    return out;
}

std::vector<RootBox> squarefree_roots(const IntPolynomial& g)
{
    const std::size_t n = g.degree();
    if (n == 1) {
        Rational r(-g.coeff(0), g.coeff(1));
        r.canonicalize();
        double v = r.get_d();
        return {RootBox{{v, 0.0}, std::fabs(v) * std::ldexp(1.0, -52) + 1e-300}};
    }
    auto ld = make_workspace<long double>(g);
    // Initial guesses on a circle whose radius matches the geometric mean of the roots.
    long double rho = 1.0L;
    if (g.coeff(0) != 0) {
        long double l0 = static_cast<long double>(log_abs(g.coeff(0)));
        long double ln = static_cast<long double>(log_abs(g.leading()));
        rho = std::exp((l0 - ln) / static_cast<long double>(n));
    }
    std::vector<Cx<long double>> z(n);
    for (std::size_t k = 0; k < n; ++k) {
        long double ang = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(k) / static_cast<long double>(n) + 0.4L;
        z[k] = {rho * std::cos(ang), rho * std::sin(ang)};
    }
    aberth(ld, z, 2000);
    if (auto boxes = certify(ld, z)) return *boxes;

    auto hp = make_workspace<cpp_bin_float_50>(g);
    auto zh = convert<cpp_bin_float_50>(z);
    aberth(hp, zh, 200);
    if (auto boxes = certify(hp, zh)) return *boxes;

    std::string text = g.to_string();
    if (text.size() > 200) text = text.substr(0, 200) + "...";
    throw PrecisionError("poly_roots: could not certify isolated roots of " + text);
}

}  // namespace

std::vector<RootBox> poly_roots(const IntPolynomial& f)
{
    if (f.is_zero() || f.degree() == 0) throw ValidationError("poly_roots: polynomial must have degree >= 1");
    std::vector<RootBox> out;
    for (const auto& [g, mult] : squarefree_decomposition(f)) {
        for (const auto& box : squarefree_roots(g))
            for (unsigned k = 0; k < mult; ++k) out.push_back(box);
    }
    return out;
}

}  // namespace heightlab
