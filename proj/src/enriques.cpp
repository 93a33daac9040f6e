#include "mpt/enriques.hpp"

#include <fstream>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace mpt {

namespace {

const Exponent kP = exponent({{Var::p, 1}});
const Exponent kU = exponent({{Var::u, 1}});
const Exponent kTS = exponent({{Var::t, 1}, {Var::s, 1}});

Exponent qe(int64_t m) { return exponent({{Var::q, m}}); }

Exponent add_e(Exponent a, const Exponent &b)
{
    for (int k = 0; k < kNumVars; ++k) {
        a[k] += b[k];
    }
    return a;
}

Exponent times(const Exponent &a, int k)
{
    Exponent r{};
    for (int v = 0; v < kNumVars; ++v) {
        r[v] = a[v] * k;
    }
    return r;
}

// Largest integer d with q^d below the cutoff.
int max_degree(int64_t q_cut) { return static_cast<int>((q_cut - 1) / scaled(Var::q, 1)); }

// (ts)^{k/2}
Exponent ts_half(int k)
{
    return exponent({{Var::t, Frac(k, 2)}, {Var::s, Frac(k, 2)}});
}

std::vector<Factor> prop_factors(int64_t q_cut, const Exponent &x)
{
    std::vector<Factor> fs;
    for (int m = 1; scaled(Var::q, m) < q_cut; ++m) {
        fs.push_back({qe(2 * m), 6});
        fs.push_back({add_e(qe(2 * m), times(x, -1)), -1});
        fs.push_back({qe(m), -8});
        fs.push_back({add_e(qe(2 * m), x), -1});
    }
    return fs;
}

HodgeData parse_hodge(const nlohmann::json &j)
{
    HodgeData h;
    h.dim = j.at("dim").get<int>();
    h.h = j.at("hodge").get<std::vector<std::vector<int>>>();
    if (static_cast<int>(h.h.size()) != h.dim + 1) {
        throw std::invalid_argument("Hodge diamond size does not match dim");
    }
    return h;
}

} // namespace

HodgeInputs HodgeInputs::defaults()
{
    HodgeInputs in;
    in.E = {1, {{1, 1}, {1, 1}}};
    in.Q = {3, {{1, 0, 0, 1}, {0, 11, 11, 0}, {0, 11, 11, 0}, {1, 0, 0, 1}}};
    return in;
}

HodgeInputs load_hodge_inputs(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    nlohmann::json j = nlohmann::json::parse(in);
    return {parse_hodge(j.at("E")), parse_hodge(j.at("Q"))};
}

Series chi_E_vir(const HodgeInputs &h) { return chi_vir(h.E); }
Series chi_Q_vir(const HodgeInputs &h) { return chi_vir(h.Q); }

Series pt_fiber_series(int64_t q_cut) { return product_expand(prop_factors(q_cut, kTS), q_cut); }

Series goettsche_equivariant(int d, const Series &resolution_motive, int64_t q_cut)
{
    std::vector<Factor> fs;
    Series arg = Series::zero(q_cut);
    for (int i = 1; scaled(Var::q, i) < q_cut; ++i) {
        fs.push_back({qe(2 * i), 2 * d});
        fs.push_back({qe(i), -d});
        arg = arg + mul(Series::monomial(qe(2 * i)), resolution_motive);
    }
    return mul(product_expand(fs, q_cut), plethystic_exp(arg.truncated(q_cut)));
}

// ------------------------------------------------------------------ DT data

int DTKey::div() const { return std::gcd(std::gcd(r, d), n); }

std::string to_string(const DTKey &k)
{
    return "(" + std::to_string(k.r) + "," + std::to_string(k.d) + "f," + std::to_string(k.n) + ")";
}

DTValue DTValue::adams(int k) const { return {mpt::adams(num, k), mpt::adams(den, k)}; }

DTValue DTValue::specialized(const Substitution &sub) const
{
    return {specialize(num, sub), specialize(den, sub)};
}

Rational DTValue::euler() const
{
    auto at_one = [](const Series &f) {
        Series e = euler_realization(f);
        for (const auto &[x, c] : e.terms()) {
            if (x != Exponent{} || c.has_symbols()) {
                throw std::invalid_argument("DT value depends on more than t, s");
            }
        }
        return e.coeff(Exponent{}).constant();
    };
    Rational d = at_one(den);
    if (sgn(d) == 0) {
        throw std::domain_error("DT value has a pole at t = s = 1");
    }
    return at_one(num) / d;
}

Series DTValue::as_polynomial() const { return divide_exact(num, den); }

std::string DTValue::to_string() const
{
    if (den == Series::constant(1)) {
        return mpt::to_string(num);
    }
    return "(" + mpt::to_string(num) + ") / (" + mpt::to_string(den) + ")";
}

DTValue operator+(const DTValue &a, const DTValue &b)
{
    if (a.den == b.den) {
        return {a.num + b.num, a.den};
    }
    return {a.num * b.den + b.num * a.den, a.den * b.den};
}

DTValue operator*(const DTValue &a, const DTValue &b) { return {a.num * b.num, a.den * b.den}; }

bool operator==(const DTValue &a, const DTValue &b)
{
    return !compare_on_common(a.num * b.den, b.num * a.den).has_value();
}

namespace {

// 1 / (k [k])
DTValue cover_weight(int k)
{
    return {Series::constant(1), scale(quantum_integer(k), k)};
}

} // namespace

DTValue dt_fiber(int r, int d)
{
    if (r < 1) {
        throw std::invalid_argument("dt_fiber needs r >= 1");
    }
    if (d % r != 0) {
        return DTValue::of(Series());
    }
    Series den = scale(quantum_integer(r), r);
    if (r % 2 == 1) {
        return {Series::constant(8), den};
    }
    Series num = Series::monomial(ts_half(-r)) - Series::constant(2) + Series::monomial(ts_half(r));
    return {scale(num, -2), den};
}

DTValue omega_fiber(int r, int d)
{
    if (r < 1) {
        throw std::invalid_argument("omega_fiber needs r >= 1");
    }
    if (r == 1) {
        return DTValue::of(Series::constant(8));
    }
    if (r == 2 && d % 2 == 0) {
        return DTValue::of(-quantum_integer(2));
    }
    return DTValue::of(Series());
}

DTValue bps_to_dt(const DTTable &omega, const DTKey &key)
{
    const int g = key.div();
    if (g == 0) {
        throw std::invalid_argument("bps_to_dt needs a nonzero class");
    }
    DTValue total = DTValue::of(Series());
    for (int k = 1; k <= g; ++k) {
        if (g % k != 0) {
            continue;
        }
        DTKey sub{key.r / k, key.d / k, key.n / k, key.type};
        auto it = omega.find(sub);
        if (it == omega.end()) {
            throw MissingDivisor("no Omega value for " + to_string(sub));
        }
        total = total + it->second.adams(k) * cover_weight(k);
    }
    return total;
}

DTValue chi_independence(const std::function<DTValue(int d)> &dt_n1, int d, int n)
{
    const int g = std::gcd(d, n);
    DTValue total = DTValue::of(Series());
    for (int k = 1; k <= g; ++k) {
        if (g % k == 0) {
            total = total + dt_n1(d / k).adams(k) * cover_weight(k);
        }
    }
    return total;
}

DTTable fiber_dt_table(int64_t q_cut, int64_t p_hi, const HodgeInputs &h)
{
    DTTable table;
    const int D = max_degree(q_cut);
    for (int d = 1; d <= D; ++d) {
        for (int r = 1; r <= d; ++r) {
            DTValue v = dt_fiber(r, d);
            if (!v.is_zero()) {
                table[{r, d, 0, {}}] = v;
            }
        }
    }
    const Series e8 = scale(chi_E_vir(h), 8);
    const Series q = chi_Q_vir(h);
    auto dt_n1 = [&](int d) { return DTValue::of(d % 2 == 1 ? e8 : q); };
    const int N = static_cast<int>(p_hi / scaled(Var::p, 1));
    for (int n = 1; n <= N; ++n) {
        for (int d = 1; d <= D; ++d) {
            table[{0, d, n, {}}] = chi_independence(dt_n1, d, n);
        }
    }
    return table;
}

Series toda_assemble(const DTTable &table, int64_t q_cut, int64_t p_hi, bool euler)
{
    std::vector<std::pair<Exponent, LinExpr>> terms;
    Series sum = Series::zero(q_cut);
    for (const auto &[key, val] : table) {
        if (key.d < 1 || scaled(Var::q, key.d) >= q_cut || key.n + key.r <= 0 || val.is_zero()) {
            continue;
        }
        if (key.n < 0 || key.r < 0) {
            throw std::invalid_argument("DT table keys need r, n >= 0");
        }
        const int sign = key.r % 2 == 1 ? 1 : -1; // (-1)^{r-1}
        Series c = euler ? Series::constant(Rational(val.euler() * (sign * (key.n + key.r))))
                         : scale(divide_exact(quantum_integer(key.n + key.r) * val.num, val.den), sign);
        auto add_at = [&](int pn) {
            Exponent e = qe(key.d);
            e[1] = scaled(Var::p, pn);
            sum = sum + mul(Series::monomial(e), c);
        };
        if (scaled(Var::p, key.n) <= p_hi) {
            add_at(key.n);
        }
        if (key.r > 0 && key.n > 0) {
            add_at(-key.n);
        }
    }
    if (sum.is_zero()) {
        return Series::constant(1, q_cut);
    }
    // Missing entries sit above p_hi; terms with negative p can pull them down.
    int64_t reach = 0;
    if (auto sup = sum.p_support(); sup && sup->first < 0) {
        int64_t factors = (q_cut - 1) / std::max<int64_t>(1, sum.q_floor());
        reach = -sup->first * factors;
    }
    Series e = exp_series(sum);
    return Series::from_slices(e.slices(), e.q_cut(), PWindow::Ascending(p_hi - reach));
}

Series pt_fiber_full(int64_t q_cut, int64_t p_hi, const HodgeInputs &h, bool euler)
{
    const Exponent y = euler ? Exponent{} : ts_half(1);
    Series chiE = chi_E_vir(h);
    Series chiQ = chi_Q_vir(h);
    Series prop = product_expand(prop_factors(q_cut, euler ? Exponent{} : kTS), q_cut);
    if (euler) {
        chiE = euler_realization(chiE);
        chiQ = euler_realization(chiQ);
    }
    Series bracket = Series::zero(q_cut);
    for (int d = 1; d <= max_degree(q_cut); ++d) {
        bracket = bracket + mul(Series::monomial(qe(d)), d % 2 == 1 ? scale(chiE, 8) : chiQ);
    }
    Series geo = product_expand_p({{add_e(kP, y), -1}, {add_e(kP, times(y, -1)), -1}},
                                  p_hi - kP[1]);
    Series pref = mul(Series::monomial(kP, -1), geo);
    return mul(prop, plethystic_exp(mul(bracket, pref)));
}

// ----------------------------------------------------------------------- GV

namespace {

std::map<int, Series> extract_once(const Series &Z)
{
    Series logz = plethystic_log(Z);
    Series inv_pref = Series::from_terms(
        {{times(kP, -1), -1}, {kU, 1}, {times(kU, -1), 1}, {kP, -1}});
    Series g = mul(logz, inv_pref);
    std::map<int, Series> out;
    for (int d = 1; d <= max_degree(g.q_cut()); ++d) {
        Series c = coefficient(g, {{Var::q, d}});
        out[d] = Series::from_slices(c.slices(), kInf, PWindow::Exact());
    }
    return out;
}

} // namespace

std::map<int, Series> gv_refined_extract(const SeriesBuilder &build, int64_t p_hi)
{
    auto first = extract_once(build(p_hi));
    auto wider = extract_once(build(p_hi + scaled(Var::p, 5)));
    for (const auto &[d, gv] : first) {
        auto it = wider.find(d);
        if (it == wider.end() || !(it->second == gv)) {
            throw UnstableWindow("GV_" + std::to_string(d) +
                                 " changes when the p-window grows by 5; widen the window");
        }
    }
    return first;
}

bool gv_symmetric(const Series &gv)
{
    Exponent pinv = exponent({{Var::p, -1}});
    Exponent uinv = exponent({{Var::u, -1}});
    return specialize(gv, {{Var::p, pinv}}) == gv && specialize(gv, {{Var::u, uinv}}) == gv;
}

std::map<int, Rational> ng_from_gv(const Series &gv, NgBasis basis)
{
    std::map<int, Rational> rest;
    for (const auto &[e, c] : gv.terms()) {
        if (e[0] != 0 || e[2] != 0 || e[3] != 0 || e[4] != 0 || e[1] % 2 != 0 || c.has_symbols()) {
            throw NotInBasisSpan("expects a rational Laurent polynomial in integral powers of p");
        }
        rest[e[1] / 2] = c.constant();
    }
    std::map<int, Rational> ng;
    while (!rest.empty()) {
        const int g = rest.rbegin()->first;
        if (g < 0 || rest.begin()->first < -g) {
            throw NotInBasisSpan("remainder " + mpt::to_string(gv) + " is not a combination");
        }
        // (-p)^{-g} (1-p)^{2g} has top coefficient (-1)^g at p^g
        Rational n = rest.rbegin()->second * (g % 2 == 0 ? 1 : -1);
        mpz_class binom = 1;
        for (int k = 0; k <= 2 * g; ++k) {
            Rational c = n * Rational(binom) * ((g + k) % 2 == 0 ? 1 : -1);
            Rational &slot = rest[k - g];
            slot -= c;
            if (sgn(slot) == 0) {
                rest.erase(k - g);
            }
            binom = binom * (2 * g - k) / (k + 1);
        }
        ng[basis == NgBasis::Standard ? g : g + 1] = n;
    }
    return ng;
}

Series ky_logZ_series(int64_t q_cut)
{
    std::vector<Factor> fs;
    for (int m = 1; scaled(Var::q, m) < q_cut; ++m) {
        if (m % 2 == 1) {
            fs.push_back({add_e(qe(m), times(kP, -1)), -2});
            fs.push_back({qe(m), -4});
            fs.push_back({add_e(qe(m), kP), -2});
        }
        fs.push_back({qe(m), -8});
    }
    return scale(product_expand(fs, q_cut), 2);
}

Series ky_gv(const Series &logz, const Rational &beta_sq_half, bool divisible, bool substituted)
{
    auto a = [&logz](const Rational &x) {
        if (x.get_den() != 1) {
            return Series();
        }
        return coefficient(logz, {{Var::q, Frac(x.get_num().get_si())}});
    };
    Series gv = a(beta_sq_half);
    if (divisible) {
        Series corr = a(beta_sq_half / 4);
        if (substituted) {
            corr = specialize(corr, {{Var::p, exponent({{Var::p, 2}})}});
        }
        gv = gv - scale(corr, ratio(1, 2));
    }
    return gv;
}

std::vector<long> sym_curve_betti(int g, int n)
{
    std::vector<long> b(2 * n + 1, 0);
    long binom = 1; // C(2g, j)
    for (int j = 0; j <= std::min(n, 2 * g); ++j) {
        for (int i = 0; i <= n - j; ++i) {
            b[j + 2 * i] += binom;
        }
        binom = binom * (2 * g - j) / (j + 1);
    }
    return b;
}

Series sym_curve_series(int g, int n_max)
{
    std::vector<std::pair<Exponent, LinExpr>> terms;
    for (int n = 0; n <= n_max; ++n) {
        auto b = sym_curve_betti(g, n);
        const int pexp = 1 - g + n;
        for (int k = 0; k < static_cast<int>(b.size()); ++k) {
            // (-1)^n u^{-n} * b_k (-u)^k * (-p)^{pexp}
            int sign = ((n + k + pexp) % 2 == 0) ? 1 : -1;
            terms.emplace_back(exponent({{Var::u, k - n}, {Var::p, pexp}}), sign * b[k]);
        }
    }
    return Series::from_terms(terms, kInf, PWindow::Ascending(scaled(Var::p, 1 - g + n_max)));
}

Series sym_curve_closed_form(int g, int n_max)
{
    Series geo = product_expand_p({{add_e(kP, times(kU, -1)), -1}, {add_e(kP, kU), -1}},
                                  scaled(Var::p, n_max));
    Series one_minus_p = Series::constant(1) - Series::monomial(kP);
    Series num = pow(one_minus_p, static_cast<unsigned>(2 * g));
    Series shift = Series::monomial(times(kP, 1 - g), (1 - g) % 2 == 0 ? 1 : -1);
    return mul(shift, mul(num, geo));
}

DTValue dt_2_2f_0_chi_t()
{
    return dt_fiber(2, 2).specialized({{Var::s, Exponent{}}});
}

std::vector<DTSpecialValue> dt_special_values(const HodgeInputs &h)
{
    return {
        {"DT(0,2df,1)", DTValue::of(chi_Q_vir(h))},
        {"DT(0,(2d+1)f,1)", DTValue::of(scale(chi_E_vir(h), 8))},
        {"DT(2,2f,0)|s=1", dt_2_2f_0_chi_t()},
    };
}

} // namespace mpt
