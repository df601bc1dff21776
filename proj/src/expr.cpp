#include "heightlab/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "heightlab/errors.hpp"

namespace heightlab {

namespace {

[[noreturn]] void fail(const std::string& what)
{
    throw ValidationError("cannot parse height expression: " + what + "\n  grammar: " + kExprGrammar);
}

std::string strip(const std::string& s)
{
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    return out;
}

Rational parse_rational(const std::string& s)
{
    if (s.empty()) fail("empty number");
    std::string body = s[0] == '-' || s[0] == '+' ? s.substr(1) : s;
    if (body.empty() || body.find_first_not_of("0123456789/") != std::string::npos || body.front() == '/' ||
        body.back() == '/' || std::count(body.begin(), body.end(), '/') > 1)
        fail("'" + s + "' is not a rational");
    Rational q;
    if (q.set_str(s[0] == '+' ? body : s, 10) != 0 || q.get_den() == 0) fail("'" + s + "' is not a rational");
    q.canonicalize();
    return q;
}

long parse_long(const std::string& s)
{
    Rational q = parse_rational(s);
    if (q.get_den() != 1 || !q.get_num().fits_slong_p()) fail("'" + s + "' is not a machine integer");
    return q.get_num().get_si();
}

std::vector<std::string> split_top(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (depth < 0) fail("unbalanced parentheses");
        if (c == sep && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (depth != 0) fail("unbalanced parentheses");
    parts.push_back(cur);
    return parts;
}

}  // namespace

HeightExpr parse_height_expr(const std::string& text)
{
    const std::string s = strip(text);
    if (s.empty()) fail("empty expression");
    HeightExpr e;
    for (const auto& factor : split_top(s, '*')) {
        if (factor.empty()) fail("empty factor");
        auto caret = split_top(factor, '^');
        if (caret.size() > 2) fail("repeated '^' in '" + factor + "'");
        const std::string atom = caret[0];
        const long k = caret.size() == 2 ? parse_long(caret[1]) : 1;
        auto call = [&](const std::string& name) -> std::optional<std::vector<std::string>> {
            if (atom.rfind(name + "(", 0) != 0) return std::nullopt;
            if (atom.back() != ')') fail("missing ')' in '" + atom + "'");
            return split_top(atom.substr(name.size() + 1, atom.size() - name.size() - 2), ',');
        };
        if (auto args = call("zeta")) {
            if (args->size() != 1) fail("zeta takes one argument");
            long n = parse_long((*args)[0]);
            if (n < 1) fail("zeta(n) needs n >= 1");
            for (long i = 0; i < std::labs(k); ++i) e.zetas.push_back(n);
        } else if (auto args = call("root")) {
            if (args->size() != 2) fail("root takes two arguments");
            Rational a = parse_rational((*args)[0]);
            long n = parse_long((*args)[1]);
            if (a == 0) fail("root(0, n) has no height");
            if (n < 1) fail("root(a, n) needs n >= 1");
            e.roots.push_back({a, n, k});
        } else {
            Rational q = parse_rational(atom);
            if (q == 0) fail("0 has no height");
            e.rational *= rpow(q, k);
        }
    }
    return e;
}

ExprHeight expr_height(const HeightExpr& e)
{
    long L = 1;
    for (const auto& r : e.roots) {
        L = std::lcm(L, r.n);
        if (L > 1000000) throw ValidationError("expression too large: root indices have lcm above 10^6");
    }
    // alpha^L = (root of unity) * Q with Q rational, so h(alpha) = h(Q) / L.
    double bits = 0;
    Rational Q = rpow(e.rational, L);
    for (const auto& r : e.roots) {
        long exponent = r.k * (L / r.n);
        bits += std::fabs(static_cast<double>(exponent)) * (rational_height(r.a).value() / std::log(2.0));
        if (bits > 5e7) throw ValidationError("expression too large to evaluate exactly");
        Q *= rpow(r.a, exponent);
    }
    ExprHeight out;
    out.power = L;
    out.exact = rational_height(Q);
    out.exact.coefficient /= L;

    const std::size_t factors = e.zetas.size() + e.roots.size() + (e.rational != 1 ? 1 : 0);
    if (factors <= 1) {
        std::optional<AlgebraicNumber> alpha;
        if (!e.zetas.empty()) alpha = AlgebraicNumber::root_of_unity(e.zetas[0]);
        else if (!e.roots.empty()) {
            const auto& r = e.roots[0];
            if (r.k == 1 && capelli_irreducible(r.a, r.n) && r.n <= 400) alpha = AlgebraicNumber::radical(r.a, r.n);
        } else {
            alpha = AlgebraicNumber::rational(e.rational);
        }
        if (alpha) out.numeric = weil_height(*alpha);
    }
    return out;
}

}  // namespace heightlab
