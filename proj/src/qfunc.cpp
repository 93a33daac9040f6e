#include "mpt/qfunc.hpp"

#include <stdexcept>

namespace mpt {

namespace {

Exponent q_power(int64_t scaled_q)
{
    Exponent e{};
    e[0] = static_cast<int32_t>(scaled_q);
    return e;
}

Exponent plus(Exponent a, const Exponent &b)
{
    for (int k = 0; k < kNumVars; ++k) {
        a[k] += b[k];
    }
    return a;
}

Exponent neg(Exponent a)
{
    for (auto &c : a) {
        c = -c;
    }
    return a;
}

Exponent half_of(const Exponent &x)
{
    Exponent h{};
    for (int k = 0; k < kNumVars; ++k) {
        if (x[k] % 2 != 0) {
            throw std::invalid_argument("square root of " + exponent_to_string(x) +
                                        " is off the exponent lattice");
        }
        h[k] = x[k] / 2;
    }
    return h;
}

void require_q_free(const Exponent &x, const char *what)
{
    if (x[0] != 0) {
        throw std::invalid_argument(std::string(what) + " argument must not involve q");
    }
}

// Scaled q-weight of q^{scale * m}.
int64_t qstep(int scale, int m) { return int64_t{scaled(Var::q, 1)} * scale * m; }

} // namespace

Series quantum_integer(int n, const Exponent &x)
{
    if (n < 1) {
        throw std::invalid_argument("quantum_integer needs n >= 1");
    }
    std::vector<std::pair<Exponent, LinExpr>> terms;
    for (int k = 0; k < n; ++k) {
        Exponent e{};
        for (int v = 0; v < kNumVars; ++v) {
            int64_t twice = int64_t{x[v]} * (2 * k - (n - 1));
            if (twice % 2 != 0) {
                throw std::invalid_argument("[n]_x with x^{1/2} off the exponent lattice");
            }
            e[v] = static_cast<int32_t>(twice / 2);
        }
        terms.emplace_back(e, 1);
    }
    return Series::from_terms(terms);
}

Series eta_power(int scale, int k, int64_t q_cut, bool prefactor)
{
    if (scale < 1) {
        throw std::invalid_argument("eta needs scale >= 1");
    }
    const int64_t shift = prefactor ? int64_t{scale} * k : 0;
    const int64_t inner_cut = q_cut - shift;
    Series body;
    if (inner_cut <= 0) {
        body = Series::zero(inner_cut);
    } else {
        std::vector<Factor> fs;
        for (int m = 1; qstep(scale, m) < inner_cut; ++m) {
            fs.push_back({q_power(qstep(scale, m)), k});
        }
        body = product_expand(fs, inner_cut);
    }
    return mul(Series::monomial(q_power(shift)), body);
}

Series eta(int scale, int64_t q_cut, bool prefactor) { return eta_power(scale, 1, q_cut, prefactor); }

Series theta(const Exponent &x, int scale, int64_t q_cut)
{
    require_q_free(x, "theta");
    const Exponent h = half_of(x);
    Series zero_mode = Series::monomial(h) - Series::monomial(neg(h));
    std::vector<Factor> fs;
    for (int m = 1; qstep(scale, m) < q_cut; ++m) {
        Exponent qm = q_power(qstep(scale, m));
        fs.push_back({plus(qm, x), 1});
        fs.push_back({plus(qm, neg(x)), 1});
        fs.push_back({qm, -2});
    }
    return mul(zero_mode, product_expand(fs, q_cut));
}

namespace {

std::vector<Factor> pair_factors(const Exponent &y, int scale, int64_t q_cut, int sign)
{
    const Exponent p = exponent({{Var::p, 1}});
    std::vector<Factor> fs;
    for (int m = 1; qstep(scale, m) < q_cut; ++m) {
        Exponent qm = q_power(qstep(scale, m));
        fs.push_back({plus(qm, plus(p, y)), sign});
        fs.push_back({plus(qm, neg(plus(p, y))), sign});
        fs.push_back({plus(qm, plus(p, neg(y))), sign});
        fs.push_back({plus(qm, plus(neg(p), y)), sign});
        fs.push_back({qm, -4 * sign});
    }
    return fs;
}

} // namespace

Series theta_pair(const Exponent &y, int scale, int64_t q_cut)
{
    require_q_free(y, "theta_pair");
    const Exponent p = exponent({{Var::p, 1}});
    Series zero_mode = Series::from_terms(
        {{p, 1}, {y, -1}, {neg(y), -1}, {neg(p), 1}});
    return mul(zero_mode, product_expand(pair_factors(y, scale, q_cut, 1), q_cut));
}

Series theta_pair_inverse(const Exponent &y, int scale, int64_t q_cut, int64_t p_hi)
{
    require_q_free(y, "theta_pair_inverse");
    const Exponent p = exponent({{Var::p, 1}});
    Series body = product_expand(pair_factors(y, scale, q_cut, -1), q_cut);
    // Expand the zero mode far enough that the product keeps p <= p_hi valid.
    int64_t reach = 0;
    if (auto sup = body.p_support()) {
        reach = std::max<int64_t>(0, -sup->first);
    }
    Series zero_inv = product_expand_p({{plus(p, y), -1}, {plus(p, neg(y)), -1}},
                                       p_hi + reach - p[1]);
    zero_inv = mul(Series::monomial(p), zero_inv);
    return mul(zero_inv, body);
}

int moebius(int n)
{
    if (n < 1) {
        throw std::invalid_argument("moebius needs n >= 1");
    }
    int result = 1;
    for (int d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            n /= d;
            if (n % d == 0) {
                return 0;
            }
            result = -result;
        }
    }
    return n > 1 ? -result : result;
}

Series plethystic_exp(const Series &f)
{
    if (f.has_symbols()) {
        throw std::invalid_argument("plethystic_exp needs a symbol-free series");
    }
    if (f.is_zero()) {
        return Series::from_slices({{0, {{Rest{}, LinExpr(1)}}}}, f.q_cut(), f.p_window());
    }
    if (f.q_floor() <= 0) {
        throw BadConstantTerm("plethystic_exp needs positive q-weight throughout");
    }
    if (f.q_cut() >= kInf) {
        throw std::invalid_argument("plethystic_exp of an untruncated series; truncate in q first");
    }
    Series sum = f;
    for (int k = 2; f.q_floor() * k < f.q_cut(); ++k) {
        sum = sum + scale(adams(f, k), ratio(1, k));
    }
    return exp_series(sum);
}

Series plethystic_log(const Series &F)
{
    Series l = log_series(F);
    if (l.is_zero()) {
        return l;
    }
    Series sum = l;
    for (int k = 2; l.q_floor() * k < l.q_cut(); ++k) {
        int mu = moebius(k);
        if (mu != 0) {
            sum = sum + scale(adams(l, k), ratio(mu, k));
        }
    }
    return sum;
}

Series virtual_shift(const Series &f, int dim)
{
    if (dim < 0) {
        throw std::invalid_argument("virtual_shift needs dim >= 0");
    }
    Exponent e{};
    e[static_cast<int>(Var::t)] = -dim;
    e[static_cast<int>(Var::s)] = -dim;
    return mul(Series::monomial(e, dim % 2 == 0 ? 1 : -1), f);
}

Series chi_ts(const HodgeData &X)
{
    std::vector<std::pair<Exponent, LinExpr>> terms;
    for (std::size_t a = 0; a < X.h.size(); ++a) {
        for (std::size_t b = 0; b < X.h[a].size(); ++b) {
            int sign = (a + b) % 2 == 0 ? 1 : -1;
            terms.emplace_back(exponent({{Var::t, static_cast<int64_t>(a)},
                                         {Var::s, static_cast<int64_t>(b)}}),
                               sign * X.h[a][b]);
        }
    }
    return Series::from_terms(terms);
}

Series chi_vir(const HodgeData &X) { return virtual_shift(chi_ts(X), X.dim); }

Series betti_realization(const Series &f)
{
    const Exponent u = exponent({{Var::u, 1}});
    return specialize(f, {{Var::t, u}, {Var::s, u}});
}

Series euler_realization(const Series &f)
{
    return specialize(f, {{Var::t, Exponent{}}, {Var::s, Exponent{}}});
}

} // namespace mpt
