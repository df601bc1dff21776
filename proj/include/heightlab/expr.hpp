#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heightlab/gmheights.hpp"

namespace heightlab {

inline constexpr const char* kExprGrammar =
    "expr := factor ('*' factor)*;  factor := atom ('^' integer)?;  "
    "atom := rational | zeta(n) | root(a, n)   e.g. root(2,8)*zeta(7)*3/5";

/// A product of a rational, roots of unity and real radicals.
struct HeightExpr {
    struct Root {
        Rational a;
        long n = 1;
        long k = 1;  // (a^{1/n})^k
    };
    Rational rational{1};
    std::vector<long> zetas;  // orders
    std::vector<Root> roots;
};

// Throws ValidationError quoting the grammar on malformed input.
HeightExpr parse_height_expr(const std::string& text);

struct ExprHeight {
    LogMultiple exact;  // h(alpha) = exact.value()
    long power = 1;     // alpha^power = root of unity * rational
    // Numeric height of a single-factor expression from its minimal polynomial.
    std::optional<HeightValue> numeric;
};

ExprHeight expr_height(const HeightExpr& e);

}  // namespace heightlab
