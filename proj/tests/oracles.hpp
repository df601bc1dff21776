#pragma once

// Independent brute-force references used by the tests.  Nothing here calls
// into the library's algorithms, only its basic number types.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <gmpxx.h>

namespace oracle {

inline bool prime_by_trial(long n)
{
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline long mod(long a, long m) { return ((a % m) + m) % m; }

inline long powmod(long b, long e, long m)
{
    long r = 1 % m;
    b = mod(b, m);
    while (e > 0) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

// #E(F_p) for y^2 = x^3 + Ax + B by listing all pairs.
inline long point_count(long A, long B, long p)
{
    std::vector<long> squares(p, 0);
    for (long y = 0; y < p; ++y) squares[y * y % p]++;
    long n = 1;
    for (long x = 0; x < p; ++x) n += squares[mod(x * x % p * x + A * x + B, p)];
    return n;
}

// Whether u is congruent to a p-th power mod p^k, by listing all residues.
inline bool pth_power_mod(long u, long p, long k)
{
    long m = 1;
    for (long i = 0; i < k; ++i) m *= p;
    u = mod(u, m);
    for (long x = 0; x < m; ++x)
        if (x % p != 0 && powmod(x, p, m) == u) return true;
    return false;
}

// Durand-Kerner in long double, independent of the library's root finder.
inline std::vector<std::complex<long double>> dk_roots(const std::vector<long double>& c)
{
    using C = std::complex<long double>;
    std::size_t d = c.size() - 1;
    std::vector<C> z(d);
    C seed(0.4L, 0.9L);
    for (std::size_t i = 0; i < d; ++i) z[i] = std::pow(seed, static_cast<long double>(i)) * (1.0L + std::abs(c[0] / c[d]));
    auto eval = [&](C x) {
        C acc = 0;
        for (std::size_t i = d + 1; i-- > 0;) acc = acc * x + c[i];
        return acc;
    };
    for (int it = 0; it < 2000; ++it) {
        long double moved = 0;
        for (std::size_t i = 0; i < d; ++i) {
            C den = c[d];
            for (std::size_t j = 0; j < d; ++j)
                if (j != i) den *= z[i] - z[j];
            C step = eval(z[i]) / den;
            z[i] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-17L) break;
    }
    return z;
}

// Mahler measure based height from integer coefficients, constant term first.
inline double mahler_height(const std::vector<long>& coeffs)
{
    std::vector<long double> c(coeffs.begin(), coeffs.end());
    long double acc = std::log(std::fabs(c.back()));
    for (auto z : dk_roots(c)) acc += std::log(std::max(1.0L, std::abs(z)));
    return static_cast<double>(acc / (c.size() - 1));
}

inline long vp(const mpz_class& n, long p)
{
    if (n == 0) return 1000000;
    mpz_class m = abs(n);
    long v = 0;
    while (m % p == 0) {
        m /= p;
        ++v;
    }
    return v;
}

}  // namespace oracle
