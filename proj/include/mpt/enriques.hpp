#pragma once

// PT / DT / BPS / GV pipeline for the Enriques Calabi-Yau threefold in fiber
// curve classes beta = d f, plus the smooth-curve and local Enriques examples.
//
// Fiber classes collapse Q^beta to q^d. Generating series in p are written as
// sum PT_{n,df} (-p)^n q^d, i.e. as series in p.

#include <compare>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "mpt/qfunc.hpp"
#include "mpt/series.hpp"

namespace mpt {

// Hodge data for chi([E]^vir) and chi([Q]^vir).
struct HodgeInputs {
    HodgeData E;
    HodgeData Q;

    static HodgeInputs defaults();
};

HodgeInputs load_hodge_inputs(const std::string &path);

Series chi_E_vir(const HodgeInputs &h);
Series chi_Q_vir(const HodgeInputs &h);

// prod_m (1-q^{2m})^6 / ((1-(ts)^{-1}q^{2m}) (1-q^m)^8 (1-ts q^{2m}))
Series pt_fiber_series(int64_t q_cut);

// (prod_i (1-q^{2i})^2/(1-q^i))^d * Exp(sum_i q^{2i} M), M a (t,s) polynomial.
Series goettsche_equivariant(int d, const Series &resolution_motive, int64_t q_cut);

// Chern character (r, d f, n). Only (r, d, n) enter the ordering; the type is
// carried along untouched.
struct DTKey {
    int r = 0;
    int d = 0;
    int n = 0;
    std::string type;

    int div() const;
    bool beta_even() const { return d % 2 == 0; }

    friend bool operator<(const DTKey &a, const DTKey &b)
    {
        return std::tie(a.r, a.d, a.n) < std::tie(b.r, b.d, b.n);
    }
    friend bool operator==(const DTKey &a, const DTKey &b)
    {
        return std::tie(a.r, a.d, a.n) == std::tie(b.r, b.d, b.n);
    }
};

std::string to_string(const DTKey &k);

// num / den with num, den exact (t,s) series; den nonzero.
struct DTValue {
    Series num;
    Series den = Series::constant(1);

    static DTValue of(const Series &s) { return {s, Series::constant(1)}; }

    bool is_zero() const { return num.is_zero(); }
    DTValue adams(int k) const;
    DTValue specialized(const Substitution &sub) const;
    // Value at t = s = 1.
    Rational euler() const;
    // num/den as a polynomial when the division is exact.
    Series as_polynomial() const;
    std::string to_string() const;

    friend DTValue operator+(const DTValue &a, const DTValue &b);
    friend DTValue operator*(const DTValue &a, const DTValue &b);
    // Equal as rational functions (cross-multiplied).
    friend bool operator==(const DTValue &a, const DTValue &b);
};

using DTTable = std::map<DTKey, DTValue>;

DTValue dt_fiber(int r, int d);
DTValue omega_fiber(int r, int d);

// DT(v) = sum_{k|v} 1/(k [k]) Omega(v/k)|_{t->t^k, s->s^k}
DTValue bps_to_dt(const DTTable &omega, const DTKey &key);

// DT(0, d f, n) from the DT(0, d f, 1) by refined chi-independence.
DTValue chi_independence(const std::function<DTValue(int d)> &dt_n1, int d, int n);

// Closed-form values DT(r, d f, 0) for d f below q_cut; with p_hi > 0 also the
// r = 0 entries DT(0, d f, n), 1 <= n <= p_hi/2, from chi-independence.
DTTable fiber_dt_table(int64_t q_cut, int64_t p_hi, const HodgeInputs &h);

// prod exp((-1)^{r-1} [n+r] DT(r,d,n) q^d p^{+-n}). With euler set the
// Euler limits are used and [n+r] becomes n+r.
Series toda_assemble(const DTTable &table, int64_t q_cut, int64_t p_hi, bool euler = false);

// rank-0 product * Exp(-p/((1-(ts)^{1/2}p)(1-(ts)^{-1/2}p)) [odd: 8 chi(E), even: chi(Q)]).
// With euler set every input is taken at t = s = 1 before assembling.
Series pt_fiber_full(int64_t q_cut, int64_t p_hi, const HodgeInputs &h, bool euler = false);

// Log Z = (-p)/((1-u^{-1}p)(1-up)) sum_d GV_d q^d. `build(p_hi)` must return
// Z valid for p <= p_hi; extraction is repeated with p_hi + 5 and must agree.
using SeriesBuilder = std::function<Series(int64_t p_hi)>;
std::map<int, Series> gv_refined_extract(const SeriesBuilder &build, int64_t p_hi);

bool gv_symmetric(const Series &gv);

enum class NgBasis { Standard, LogZ };
// Standard: GV = sum n_g (-p)^{-g}(1-p)^{2g}; LogZ: sum n_g (-p)^{1-g}(1-p)^{2g-2}.
std::map<int, Rational> ng_from_gv(const Series &gv, NgBasis basis);

// 2 prod_{m odd} (1-p^{-1}q^m)^{-2}(1-q^m)^{-4}(1-pq^m)^{-2} prod_m (1-q^m)^{-8}
Series ky_logZ_series(int64_t q_cut);
// a(beta^2/2), minus a((beta/2)^2/2)/2 when 2|beta. With `substituted` the
// correction is taken at p -> p^2.
Series ky_gv(const Series &logz, const Rational &beta_sq_half, bool divisible,
             bool substituted = false);

// Poincare polynomial of Sym^n of a genus g curve (Macdonald).
std::vector<long> sym_curve_betti(int g, int n);
// sum_{n <= n_max} H([Sym^n C]^vir) (-p)^{1-g+n}
Series sym_curve_series(int g, int n_max);
// (-p)^{1-g} (1-p)^{2g} / ((1-u^{-1}p)(1-up)), valid for p <= 1-g+n_max
Series sym_curve_closed_form(int g, int n_max);

struct DTSpecialValue {
    std::string label;
    DTValue value;
};
std::vector<DTSpecialValue> dt_special_values(const HodgeInputs &h);
// dt_fiber(2, 2) at s = 1
DTValue dt_2_2f_0_chi_t();

} // namespace mpt
