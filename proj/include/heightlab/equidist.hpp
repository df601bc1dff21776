#pragma once

#include <complex>
#include <string>
#include <vector>

#include "heightlab/elliptic.hpp"

namespace heightlab {

struct OrbitStatistic {
    std::string family;
    long index = 0;
    long sample_count = 0;
    double value = 0.0;
    double error = 0.0;
    double limit = 0.0;
};

struct GaussStatistic {
    OrbitStatistic stat;
    // value = p^{-exponent}, exactly.
    Rational exponent{0};
};

// min(|beta|_w, 1/|beta|_w) over the orbit of beta = a^{1/p^n}; every conjugate
// has the same absolute value at the unique place above p.
GaussStatistic gauss_statistic(const Rational& a, long p, long n);

// Average of min(m, lambda_infinity(Q)) over the nonzero N-torsion points Q.
OrbitStatistic suz_torsion_average(const EllipticCurve& E, long N, double cap, int depth = 12);

// Archimedean local height of a point given only by a complex x-coordinate.
double archimedean_lambda_complex(const EllipticCurve& E, std::complex<double> x, int depth);

Rational bernoulli_b2(const Rational& x);
// Mean of b2 over values in [0, 1).
Rational bernoulli_uniformity(const std::vector<Rational>& values);
// j / N for j = 0 .. N-1.
std::vector<Rational> uniform_grid(long N);

}  // namespace heightlab
