#pragma once

// Exact coefficient arithmetic: GMP rationals, optionally extended
// affine-linearly by formal Betti-number symbols b_{i,d}.

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "mpt/errors.hpp"

namespace mpt {

using Rational = mpq_class;

// Parses "n", "-n" or "n/d" (no decimals); result is canonical.
Rational parse_rational(std::string_view text);

// a/b in lowest terms (mpq_class(a, b) alone does not canonicalise).
inline Rational ratio(long a, long b)
{
    Rational r(a, b);
    r.canonicalize();
    return r;
}

// Always "num/den", e.g. "8/1", "-1/2".
std::string rational_to_string(const Rational &r);

// b_{i,d}: i-th Betti number of the moduli space of square 2d.
struct BettiSymbol {
    int d = 0;
    int i = 0;

    BettiSymbol() = default;
    BettiSymbol(int d_, int i_);

    friend auto operator<=>(const BettiSymbol &, const BettiSymbol &) = default;
    friend bool operator==(const BettiSymbol &, const BettiSymbol &) = default;
};

std::string to_string(const BettiSymbol &s);

// constant + sum_k coef_k * b_{i_k,d_k}. Terms are kept sorted by symbol with
// no zero coefficients, so structural equality is value equality.
class LinExpr {
public:
    using Term = std::pair<BettiSymbol, Rational>;

    LinExpr() = default;
    LinExpr(const Rational &c) : constant_(c) {} // NOLINT(implicit)
    LinExpr(long c) : constant_(c) {}            // NOLINT(implicit)
    LinExpr(int c) : constant_(c) {}             // NOLINT(implicit)

    static LinExpr symbol(BettiSymbol s, const Rational &coef = 1);

    const Rational &constant() const { return constant_; }
    const std::vector<Term> &terms() const { return terms_; }

    bool has_symbols() const { return !terms_.empty(); }
    bool is_zero() const { return terms_.empty() && sgn(constant_) == 0; }

    // Coefficient of one symbol (0 if absent).
    Rational coefficient(const BettiSymbol &s) const;

    LinExpr &operator+=(const LinExpr &o);
    LinExpr &operator-=(const LinExpr &o);
    LinExpr &operator*=(const Rational &k);
    LinExpr &operator/=(const Rational &k);
    LinExpr operator-() const;

    // Affine-linear product; throws SymbolDegreeOverflow if both carry symbols.
    friend LinExpr operator*(const LinExpr &a, const LinExpr &b);
    friend LinExpr operator+(LinExpr a, const LinExpr &b) { return a += b; }
    friend LinExpr operator-(LinExpr a, const LinExpr &b) { return a -= b; }
    friend LinExpr operator*(LinExpr a, const Rational &k) { return a *= k; }
    friend LinExpr operator/(LinExpr a, const Rational &k) { return a /= k; }

    friend bool operator==(const LinExpr &a, const LinExpr &b);

    // acc += a * b without materialising the product.
    friend void add_product(LinExpr &acc, const LinExpr &a, const LinExpr &b);

    // Replace every symbol by a concrete value.
    Rational substitute(const std::function<Rational(const BettiSymbol &)> &value) const;

    // Replace the symbols for which `value` has an answer, keep the rest.
    LinExpr partial_substitute(
        const std::function<std::optional<Rational>(const BettiSymbol &)> &value) const;

    std::string to_string() const;

private:
    Rational constant_{0};
    std::vector<Term> terms_;
};

LinExpr lin_add(const LinExpr &a, const LinExpr &b);
LinExpr lin_mul(const LinExpr &a, const LinExpr &b);

std::ostream &operator<<(std::ostream &os, const LinExpr &e);

} // namespace mpt
