// Formal group of y^2 = x^3 + Ax + B in the parameter t = -x/y, following the
// usual construction: expand w = -1/y from w = t^3 + A t w^2 + B w^3, take the
// chord through (t1, w(t1)) and (t2, w(t2)), and negate its third intersection.

#include "heightlab/elliptic.hpp"

#include "heightlab/errors.hpp"

namespace heightlab {

namespace {

int total_degree(const Series::Exponent& e) { return e[0] + e[1] + e[2]; }

}  // namespace

Series Series::variable(int index, int order)
{
    if (index < 0 || index > 2) throw ValidationError("Series: variable index out of range");
    Series s(order);
    Exponent e{0, 0, 0};
    e[static_cast<std::size_t>(index)] = 1;
    s.add(e, 1);
    return s;
}

Series Series::constant(const Rational& c, int order)
{
    Series s(order);
    s.add({0, 0, 0}, c);
    return s;
}

Rational Series::coeff(const Exponent& e) const
{
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

void Series::add(const Exponent& e, const Rational& c)
{
    if (total_degree(e) > order_ || c == 0) return;
    Rational& slot = terms_[e];
    slot += c;
    if (slot == 0) terms_.erase(e);
}

int Series::valuation() const
{
    int v = order_ + 1;
    for (const auto& [e, c] : terms_) v = std::min(v, total_degree(e));
    return v;
}

Series Series::operator+(const Series& o) const
{
    Series out(std::min(order_, o.order_));
    for (const auto& [e, c] : terms_) out.add(e, c);
    for (const auto& [e, c] : o.terms_) out.add(e, c);
    return out;
}

Series Series::operator-(const Series& o) const { return *this + o * Rational(-1); }

Series Series::operator*(const Series& o) const
{
    Series out(std::min(order_, o.order_));
    for (const auto& [e1, c1] : terms_) {
        const int d1 = total_degree(e1);
        for (const auto& [e2, c2] : o.terms_) {
            if (d1 + total_degree(e2) > out.order_) continue;
            out.add({e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]}, c1 * c2);
        }
    }
    return out;
}

Series Series::operator*(const Rational& c) const
{
    Series out(order_);
    for (const auto& [e, v] : terms_) out.add(e, v * c);
    return out;
}

Series Series::pow(int k) const
{
    if (k < 0) throw ValidationError("Series::pow: negative exponent");
    Series result = constant(1, order_);
    Series base = *this;
    while (k > 0) {
        if (k & 1) result = result * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return result;
}

Series Series::reciprocal() const
{
    if (coeff({0, 0, 0}) != 1) throw ValidationError("Series::reciprocal: constant term must be 1");
    // 1 / (1 + u) = sum (-u)^k, and u has valuation >= 1.
    Series u = *this - constant(1, order_);
    Series term = constant(1, order_);
    Series sum = term;
    const Series neg_u = u * Rational(-1);
    for (int k = 1; k <= order_; ++k) {
        term = term * neg_u;
        if (term.is_zero()) break;
        sum = sum + term;
    }
    return sum;
}

Series Series::substitute(const std::array<std::optional<Series>, 3>& images) const
{
    int out_order = order_;
    for (const auto& img : images) {
        if (!img) continue;
        if (img->coeff({0, 0, 0}) != 0) throw ValidationError("Series::substitute: image has a constant term");
        out_order = std::min(out_order, img->order());
    }
    // Powers of each image, computed on demand.
    std::array<std::vector<Series>, 3> powers;
    auto power = [&](std::size_t var, int k) -> const Series& {
        auto& cache = powers[var];
        if (cache.empty()) cache.push_back(constant(1, out_order));
        while (static_cast<int>(cache.size()) <= k) cache.push_back(cache.back() * *images[var]);
        return cache[static_cast<std::size_t>(k)];
    };
    Series out(out_order);
    for (const auto& [e, c] : terms_) {
        Series term = constant(c, out_order);
        Exponent kept{0, 0, 0};
        for (std::size_t v = 0; v < 3; ++v) {
            if (images[v]) term = term * power(v, e[v]);
            else kept[v] = e[v];
        }
        if (kept != Exponent{0, 0, 0}) {
            Series mono(out_order);
            mono.add(kept, 1);
            term = term * mono;
        }
        for (const auto& [e2, c2] : term.terms_) out.add(e2, c2);
    }
    return out;
}

std::string Series::to_string() const
{
    std::string out;
    static const char* names[3] = {"t1", "t2", "t3"};
    for (const auto& [e, c] : terms_) {
        if (!out.empty()) out += " + ";
        out += "(" + c.get_str() + ")";
        for (std::size_t v = 0; v < 3; ++v) {
            if (e[v] == 0) continue;
            out += std::string("*") + names[v];
            if (e[v] > 1) out += "^" + std::to_string(e[v]);
        }
    }
    if (!out.empty()) out += " + ";
    return out + "O(deg " + std::to_string(order_ + 1) + ")";
}

FormalGroupData formal_group(const EllipticCurve& E, int order)
{
    if (order < 3) throw ValidationError("formal_group: truncation order must be >= 3");
    const Rational A(E.A()), B(E.B());
    const Series t = Series::variable(0, order);

    // w = t^3 + A t w^2 + B w^3; each pass fixes at least one more degree.
    Series w = t.pow(3);
    for (int it = 0; it < order; ++it) w = t.pow(3) + t * w * w * A + w.pow(3) * B;

    // lambda = (w(t2) - w(t1)) / (t2 - t1) = sum_k a_k sum_{i+j=k-1} t1^i t2^j
    Series lambda(order);
    for (const auto& [e, c] : w.terms()) {
        const int k = e[0];
        for (int i = 0; i <= k - 1; ++i) lambda.add({i, k - 1 - i, 0}, c);
    }
    const Series t1 = Series::variable(0, order);
    const Series t2 = Series::variable(1, order);
    const Series nu = w - lambda * t1;
    const Series lambda2 = lambda * lambda;
    const Series num = lambda * nu * Rational(2 * A) + lambda2 * nu * Rational(3 * B);
    const Series den = Series::constant(1, order) + lambda2 * A + lambda2 * lambda * B;
    const Series law = t1 + t2 + num * den.reciprocal();

    // i(t): F(t, i(t)) = 0, refined one degree per pass from i = -t.
    Series inv = t * Rational(-1);
    for (int it = 0; it < order; ++it) {
        Series residue = law.substitute({std::nullopt, inv, std::nullopt});
        if (residue.is_zero()) break;
        inv = inv - residue;
    }

    FormalGroupData out;
    out.order = order;
    out.w = w;
    out.law = law;
    out.inverse = inv;
    return out;
}

}  // namespace heightlab
