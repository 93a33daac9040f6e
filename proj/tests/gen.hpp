#pragma once

// Small random generators for property tests. Seeds are fixed so failures
// reproduce.

#include <random>

#include "mpt/series.hpp"

namespace gen {

using mpt::Exponent;
using mpt::LinExpr;
using mpt::Rational;
using mpt::Series;

inline std::mt19937_64 &rng()
{
    static std::mt19937_64 r(0x5eed);
    return r;
}

inline int uniform(int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng());
}

inline Rational rational(int range = 5)
{
    int den = uniform(1, 4);
    Rational r(uniform(-range, range), den);
    r.canonicalize();
    return r;
}

inline Rational nonzero_rational(int range = 5)
{
    Rational r;
    do {
        r = rational(range);
    } while (sgn(r) == 0);
    return r;
}

inline LinExpr linexpr(int max_symbols = 3)
{
    LinExpr e(rational());
    int n = uniform(0, max_symbols);
    for (int k = 0; k < n; ++k) {
        int d = uniform(0, 3);
        e += LinExpr::symbol({d, uniform(0, 4 * d + 2)}, rational());
    }
    return e;
}

// Random exponent: q in [q_lo, q_hi] (whole units), others in [-r, r] (whole
// or half units).
inline Exponent exponent(int q_lo, int q_hi, int r = 2, bool halves = false)
{
    Exponent e{};
    e[0] = 24 * uniform(q_lo, q_hi);
    for (int k = 1; k < mpt::kNumVars; ++k) {
        e[k] = halves ? uniform(-2 * r, 2 * r) : 2 * uniform(-r, r);
    }
    return e;
}

inline Series series(int terms, int q_lo, int q_hi, int64_t q_cut = mpt::kInf, int r = 2,
                     bool halves = false)
{
    std::vector<std::pair<Exponent, LinExpr>> ts;
    for (int k = 0; k < terms; ++k) {
        ts.emplace_back(exponent(q_lo, q_hi, r, halves), rational());
    }
    return Series::from_terms(ts, q_cut);
}

} // namespace gen
