#include "heightlab/equidist.hpp"

#include <cmath>
#include <complex>

#include "heightlab/errors.hpp"
#include "heightlab/padics.hpp"

namespace heightlab {

GaussStatistic gauss_statistic(const Rational& a, long p, long n)
{
    if (p < 3 || !is_prime(p)) throw ValidationError("gauss_statistic: p must be an odd prime");
    if (n < 0) throw ValidationError("gauss_statistic: level must be >= 0");
    if (a == 0) throw ValidationError("gauss_statistic: a must be nonzero");
    GaussStatistic out;
    long v = *vp(a, p);
    Integer pn = ipow(Integer(p), static_cast<unsigned long>(n));
    out.exponent = Rational(std::labs(v), pn);
    out.exponent.canonicalize();
    out.stat.family = "gauss";
    out.stat.index = n;
    out.stat.sample_count = pn.fits_slong_p() ? pn.get_si() : -1;
    out.stat.value = std::pow(static_cast<double>(p), -out.exponent.get_d());
    out.stat.limit = 1.0;
    return out;
}

double archimedean_lambda_complex(const EllipticCurve& E, std::complex<double> x0, int depth)
{
    using C = std::complex<long double>;
    const long double A = static_cast<long double>(E.A().get_d());
    const long double B = static_cast<long double>(E.B().get_d());
    const long double log_disc = static_cast<long double>(log_abs(E.discriminant()));
    C X(x0.real(), x0.imag()), Z(1.0L, 0.0L);
    long double sum = 0, weight = 1;
    for (int k = 0; k < depth; ++k) {
        weight /= 4;
        C Z2 = Z * Z;
        C Cv = X * X * X + A * X * Z2 + B * Z2 * Z;
        if (std::abs(Cv) == 0 || std::abs(Z) == 0) throw TorsionOrbitError("complex orbit reached a 2-torsion point or O");
        sum += weight * (std::log(2.0L) + (std::log(std::abs(Cv)) - 3 * std::log(std::abs(Z))) / 2 - log_disc / 4);
        C X2 = X * X;
        C Xn = X2 * X2 - 2 * A * X2 * Z2 - 8 * B * X * Z2 * Z + A * A * Z2 * Z2;
        C Zn = 4.0L * Z * Cv;
        long double scale = std::max(std::abs(Xn), std::abs(Zn));
        X = Xn / scale;
        Z = Zn / scale;
    }
    if (std::abs(Z) == 0) throw TorsionOrbitError("complex orbit reached O");
    sum += weight * (std::log(std::max(std::abs(X), std::abs(Z))) - std::log(std::abs(Z))) / 2;
    return static_cast<double>(sum);
}

OrbitStatistic suz_torsion_average(const EllipticCurve& E, long N, double cap, int depth)
{
    if (N < 3 || N > 13 || N % 2 == 0) throw ValidationError("suz_torsion_average: N must be odd with 3 <= N <= 13");
    if (depth < 1) throw ValidationError("suz_torsion_average: depth must be >= 1");
    IntPolynomial f = division_polynomial(E, N);
    auto roots = poly_roots(f);
    OrbitStatistic out;
    out.family = "suz";
    out.index = N;
    out.sample_count = 2 * static_cast<long>(roots.size());
    out.limit = 0.0;
    double sum = 0.0, worst_radius = 0.0;
    for (const auto& box : roots) {
        double lam = archimedean_lambda_complex(E, box.center, depth);
        sum += std::min(cap, lam);
        worst_radius = std::max(worst_radius, box.radius / std::max(1.0, std::abs(box.center)));
    }
    out.value = sum / static_cast<double>(roots.size());
    // Tail of the series plus the root uncertainty amplified by the doubling steps.
    out.error = std::ldexp(1.0 + std::fabs(log_abs(E.discriminant())) / 4, -2 * depth) +
                worst_radius * std::ldexp(1.0, depth) + 1e-12;
    return out;
}

Rational bernoulli_b2(const Rational& x) { return x * x - x + Rational(1, 6); }

Rational bernoulli_uniformity(const std::vector<Rational>& values)
{
    if (values.empty()) throw ValidationError("bernoulli_uniformity: no values");
    Rational sum = 0;
    for (const auto& v : values) {
        if (v < 0 || v >= 1) throw ValidationError("bernoulli_uniformity: value " + v.get_str() + " outside [0, 1)");
        sum += bernoulli_b2(v);
    }
    return sum / Rational(static_cast<long>(values.size()));
}

std::vector<Rational> uniform_grid(long N)
{
    if (N < 1) throw ValidationError("uniform_grid: N must be >= 1");
    std::vector<Rational> out;
    out.reserve(static_cast<std::size_t>(N));
    for (long j = 0; j < N; ++j) {
        Rational r(j, N);
        r.canonicalize();
        out.push_back(r);
    }
    return out;
}

}  // namespace heightlab
