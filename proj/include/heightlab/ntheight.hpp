#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heightlab/elliptic.hpp"
#include "heightlab/gmheights.hpp"

namespace heightlab {

inline constexpr int kDefaultSeriesDepth = 12;
inline constexpr int kDefaultLimitDepth = 10;
inline constexpr int kMaxLimitDepth = 13;

// Place 0 is the archimedean one; any other value is a prime.
inline constexpr long kArchimedean = 0;

enum class LocalMethod { series, closed_form, limit };
const char* to_string(LocalMethod m);

struct LocalHeight {
    long place = kArchimedean;
    double value = 0.0;
    // Finite places: value = coefficient * log(place), exactly.
    std::optional<Rational> coefficient;
    double error = 0.0;
    LocalMethod method = LocalMethod::series;
    // Good finite places: whether the closed form agreed with the series.
    std::optional<bool> closed_form_agrees;
};

// Local Neron height by unrolling the duplication relation
//   lambda(2Q) = 4 lambda(Q) - log|2y(Q)| + (1/4) log|Delta|
// n times and closing with (1/2) log max(1, |x(2^n P)|).
LocalHeight local_height_series(const EllipticCurve& E, const EcPoint& P, long place, int depth = kDefaultSeriesDepth);

// (1/2) log max(1, |x(P)|_p) at a prime of good reduction.
LocalHeight local_height_good_closed(const EllipticCurve& E, const EcPoint& P, long p);

struct HeightBreakdown {
    std::vector<LocalHeight> entries;  // archimedean first, then primes ascending
    double total = 0.0;
    double error = 0.0;
};

enum class HeightMode { local_sum, limit };

struct NtHeight {
    double value = 0.0;
    double error = 0.0;
    std::optional<long> torsion_order;
    std::optional<HeightBreakdown> breakdown;
};

NtHeight nt_height(const EllipticCurve& E, const EcPoint& P, HeightMode mode, int depth = 0);

// Places entering the local sum for P: infinity, primes dividing the
// denominator of x(P), primes dividing the discriminant.
std::vector<long> height_places(const EllipticCurve& E, const EcPoint& P);

double partial_height(const EllipticCurve& E, const EcPoint& P, long place, int depth = kDefaultSeriesDepth);

struct ParallelogramResult {
    double residual = 0.0;
    bool ok = false;
};

ParallelogramResult parallelogram_check(const EllipticCurve& E, const EcPoint& P, const EcPoint& Q, double tol,
                                        int depth = kDefaultSeriesDepth);

// sum of h(alpha_i) plus the Neron-Tate height of P.
HeightValue semiabelian_height(const std::vector<AlgebraicNumber>& alphas, const EllipticCurve& E, const EcPoint& P);

struct GammaSatVerdict {
    SatVerdict::Kind kind = SatVerdict::Kind::inconclusive;
    Integer witness{0};  // product of the component exponents and the torsion order
    std::vector<SatVerdict> components;
    std::optional<long> torsion_order;
    std::string detail;
};

GammaSatVerdict gamma_sat_check(const std::vector<AlgebraicNumber>& alphas, const EllipticCurve& E, const EcPoint& P,
                                const Rational& a, long bound);

// x-only doubling orbit with common factors removed only at the primes that
// can divide them.  Exposed for tests.
struct ProjectiveX {
    Integer X{1};
    Integer Z{0};
};
ProjectiveX x_double(const EllipticCurve& E, const ProjectiveX& q, const std::vector<Integer>& primes);
std::vector<Integer> doubling_gcd_primes(const EllipticCurve& E);

}  // namespace heightlab
