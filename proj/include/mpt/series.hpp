#pragma once

// Truncated multivariate Laurent series in q, p, u, t, s over LinExpr.
//
// Exponents are stored scaled by a fixed per-variable denominator (24 for q,
// 2 for the others), so q^{1/24} and (t s)^{1/2} are lattice points.
// Truncation is q-adic: a series is exact for every q-weight below q_cut().
// Each q-slice is a finite Laurent polynomial in (p, u, t, s), except that a
// series may declare a p-window outside of which coefficients are unknown.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mpt/errors.hpp"
#include "mpt/ring.hpp"

namespace mpt {

enum class Var : int { q = 0, p = 1, u = 2, t = 3, s = 4 };

inline constexpr int kNumVars = 5;
inline constexpr std::array<int, kNumVars> kDenoms{24, 2, 2, 2, 2};
inline constexpr std::array<std::string_view, kNumVars> kVarNames{"q", "p", "u", "t", "s"};

// Sentinel for "no bound" on q cutoffs and p windows (scaled units).
inline constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 4;

using Exponent = std::array<int32_t, kNumVars>; // scaled, (q, p, u, t, s)
using Rest = std::array<int32_t, kNumVars - 1>; // scaled, (p, u, t, s)
using Poly = std::map<Rest, LinExpr>;

// A true (unscaled) exponent such as 1/2.
struct Frac {
    int64_t num = 0;
    int64_t den = 1;
    Frac() = default;
    Frac(int64_t n) : num(n) {} // NOLINT(implicit)
    Frac(int64_t n, int64_t d) : num(n), den(d) {}
};

// Scaled integer for a true exponent of `v`; throws if off the lattice.
int32_t scaled(Var v, Frac e);
Exponent exponent(std::initializer_list<std::pair<Var, Frac>> parts);
Rational unscaled(Var v, int64_t scaled_exp);

inline Rest rest_of(const Exponent &e) { return {e[1], e[2], e[3], e[4]}; }
inline Exponent join(int64_t q, const Rest &r)
{
    return {static_cast<int32_t>(q), r[0], r[1], r[2], r[3]};
}

// Validity of p-exponents per q-slice. Exact: the whole support is known.
// Window: only p in [lo, hi] (scaled) is known; lo may be -kInf, which is
// the normal case for expansions ascending in p.
struct PWindow {
    bool exact = true;
    int64_t lo = -kInf;
    int64_t hi = kInf;

    static PWindow Exact() { return {}; }
    static PWindow Window(int64_t lo, int64_t hi);
    static PWindow Ascending(int64_t hi) { return Window(-kInf, hi); }

    bool contains(int64_t p) const { return exact || (p >= lo && p <= hi); }
    bool lower_unbounded() const { return exact || lo <= -kInf; }

    friend bool operator==(const PWindow &, const PWindow &) = default;
};

PWindow intersect(const PWindow &a, const PWindow &b);
std::string to_string(const PWindow &w);

class Series {
public:
    using SliceMap = std::map<int64_t, Poly>;

    Series() = default; // exact zero

    static Series zero(int64_t q_cut = kInf, PWindow w = PWindow::Exact());
    static Series constant(const LinExpr &c, int64_t q_cut = kInf);
    static Series monomial(const Exponent &e, const LinExpr &coef = 1, int64_t q_cut = kInf);
    // Normalises: drops zero coefficients and terms outside the valid region.
    static Series from_slices(SliceMap slices, int64_t q_cut, PWindow w);
    static Series from_terms(const std::vector<std::pair<Exponent, LinExpr>> &terms,
                             int64_t q_cut = kInf, PWindow w = PWindow::Exact());

    const SliceMap &slices() const { return slices_; }
    int64_t q_cut() const { return q_cut_; }
    const PWindow &p_window() const { return window_; }

    bool is_zero() const { return slices_.empty(); }
    std::size_t size() const;
    bool has_symbols() const;

    LinExpr coeff(const Exponent &e) const;
    std::vector<std::pair<Exponent, LinExpr>> terms() const;

    // Lowest stored q exponent, or q_cut() when no term is stored (every
    // nonzero term of the true series sits at or above this).
    int64_t q_floor() const;
    // Lowest p exponent any nonzero term of the true series can have.
    int64_t p_floor() const;
    // [min, max] of stored p exponents; nullopt for the zero series.
    std::optional<std::pair<int64_t, int64_t>> p_support() const;

    Series truncated(int64_t q_cut) const;
    Series restricted(const PWindow &w) const;
    Series operator-() const;

    friend bool operator==(const Series &, const Series &) = default;

private:
    void normalize();

    SliceMap slices_;
    int64_t q_cut_ = kInf;
    PWindow window_;
};

// First coefficient where two series differ on their common valid region.
struct Mismatch {
    Exponent exp{};
    LinExpr lhs;
    LinExpr rhs;
    std::string to_string() const;
};
std::optional<Mismatch> compare_on_common(const Series &a, const Series &b);

std::string exponent_to_string(const Exponent &e);
std::string to_string(const Series &f);

Series add(const Series &f, const Series &g);
Series sub(const Series &f, const Series &g);
Series scale(const Series &f, const LinExpr &c);
Series mul(const Series &f, const Series &g);
Series pow(const Series &f, unsigned k);

inline Series operator+(const Series &f, const Series &g) { return add(f, g); }
inline Series operator-(const Series &f, const Series &g) { return sub(f, g); }
inline Series operator*(const Series &f, const Series &g) { return mul(f, g); }

// Multiplicative inverse, solved q-slice by q-slice. The lowest q-slice must be
// a single monomial with a nonzero rational coefficient. `q_cap` bounds the
// result when the input is an infinite-order polynomial.
Series invert(const Series &f, int64_t q_cap = kInf);

// num / den by recursion in q, with exact Laurent division in (p,u,t,s) at
// every slice. Throws InexactDivision when a slice leaves a remainder.
Series divide_exact(const Series &num, const Series &den, int64_t q_cap = kInf);

// Exact division of finite Laurent polynomials in (p,u,t,s); nullopt when the
// division leaves a remainder.
std::optional<Poly> poly_divide_exact(const Poly &num, const Poly &den);

// Every scaled exponent multiplied by k; truncation scaled alike.
Series adams(const Series &f, int k);

using Substitution = std::map<Var, Exponent>;
// Replaces each mapped variable by a monomial in the remaining variables.
Series specialize(const Series &f, const Substitution &map);

// Sub-series of terms with the given exponents; constrained variables are
// set to exponent 0 in the result.
Series coefficient(const Series &f, const std::map<Var, Frac> &constraints);

// Ordinary formal exp / log, truncated at the input's q cutoff.
Series exp_series(const Series &f);
Series log_series(const Series &f);

// (1 - coef * x^mono)^exponent
struct Factor {
    Exponent mono{};
    int exponent = 1;
    Rational coef = 1;
};

// Product of factors with positive q-weight, expanded to q_cut.
Series product_expand(const std::vector<Factor> &factors, int64_t q_cut);
// Multiplies an existing series by the factors (same rules).
Series product_expand_onto(Series base, const std::vector<Factor> &factors);
// Product of factors with zero q-weight and positive p-weight, expanded
// ascending in p up to p_hi (scaled); the result carries Ascending(p_hi).
Series product_expand_p(const std::vector<Factor> &factors, int64_t p_hi);

} // namespace mpt
