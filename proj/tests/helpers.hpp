#pragma once

#include <string>

#include "doctest.h"
#include "mpt/series.hpp"

namespace th {

using namespace mpt;

inline Series mono(std::initializer_list<std::pair<Var, Frac>> e, LinExpr c = 1)
{
    return Series::monomial(exponent(e), c);
}

inline Series one() { return Series::constant(1); }

// Scaled cutoff for "exact through q^n".
inline int64_t through(Frac n) { return scaled(Var::q, n) + 1; }
inline int64_t qcut(Frac n) { return scaled(Var::q, n); }

// Empty string when equal on the common region, else the first mismatch.
inline std::string diff(const Series &a, const Series &b)
{
    auto m = compare_on_common(a, b);
    return m ? m->to_string() : std::string();
}

} // namespace th

#define CHECK_SERIES_EQ(a, b) CHECK(th::diff((a), (b)) == std::string())
