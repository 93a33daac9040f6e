#include "mpt/perverse.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "mpt/json_io.hpp"
#include "mpt/qfunc.hpp"

namespace mpt {

namespace {

Exponent ex(int q, int p, int u) { return exponent({{Var::q, q}, {Var::p, p}, {Var::u, u}}); }

Exponent add_e(Exponent a, const Exponent &b)
{
    for (int k = 0; k < kNumVars; ++k) {
        a[k] += b[k];
    }
    return a;
}

Series m(const Exponent &e, const LinExpr &c = 1) { return Series::monomial(e, c); }

int max_degree(int64_t q_cut) { return static_cast<int>((q_cut - 1) / scaled(Var::q, 1)); }

// (1-u^{-1}p)(1-up)/(-p) = -p^{-1} + u + u^{-1} - p
Series keyeq_prefactor()
{
    return Series::from_terms({{ex(0, -1, 0), -1}, {ex(0, 0, 1), 1}, {ex(0, 0, -1), 1}, {ex(0, 1, 0), -1}});
}

int sign_of(int k) { return k % 2 == 0 ? 1 : -1; }

std::vector<LinExpr> default_row(int d)
{
    if (d == 0) {
        return {1, 2, 1};
    }
    if (d == 1) {
        return {1, 0, 10, 22, 10, 0, 1};
    }
    return {};
}

} // namespace

// ------------------------------------------------------------------- Betti

void BettiTable::set(int d, const std::vector<Rational> &betti, bool complete)
{
    const int len = 4 * d + 3;
    if (d < 0) {
        throw std::invalid_argument("Betti row needs d >= 0");
    }
    if (static_cast<int>(betti.size()) > len || (complete && static_cast<int>(betti.size()) != len)) {
        throw std::invalid_argument("Betti row for d = " + std::to_string(d) + " needs " +
                                    std::to_string(len) + " entries");
    }
    std::vector<LinExpr> row(len);
    std::vector<bool> known(len, false);
    for (int i = 0; i < static_cast<int>(betti.size()); ++i) {
        for (int k : {i, len - 1 - i}) {
            if (known[k] && row[k] != LinExpr(betti[i])) {
                throw std::invalid_argument("Betti row for d = " + std::to_string(d) +
                                            " violates Poincare duality");
            }
            row[k] = betti[i];
            known[k] = true;
        }
    }
    for (int i = 0; i < len; ++i) {
        if (!known[i]) {
            row[i] = LinExpr::symbol(BettiSymbol(d, std::min(i, len - 1 - i)));
        }
    }
    rows_[d] = std::move(row);
}

std::vector<LinExpr> BettiTable::row(int d) const
{
    if (auto it = rows_.find(d); it != rows_.end()) {
        return it->second;
    }
    BettiTable tmp;
    auto fixed = default_row(d);
    if (!fixed.empty()) {
        return fixed;
    }
    tmp.set(d, {1, 0, 11}, false);
    return tmp.rows_.at(d);
}

bool BettiTable::is_complete(int d) const
{
    auto r = row(d);
    return std::none_of(r.begin(), r.end(), [](const LinExpr &e) { return e.has_symbols(); });
}

BettiTable BettiTable::parse(const std::string &json_text)
{
    BettiTable t;
    auto j = nlohmann::json::parse(json_text);
    if (!j.is_array()) {
        throw std::invalid_argument("Betti file must be a JSON array");
    }
    for (const auto &row : j) {
        std::vector<Rational> b;
        for (const auto &v : row.at("betti")) {
            b.emplace_back(v.get<long>());
        }
        t.set(row.at("d").get<int>(), b, row.value("complete", true));
    }
    return t;
}

BettiTable BettiTable::load(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

// ---------------------------------------------------------- generating series

Series keyeq_rhs1(int64_t q_cut)
{
    std::vector<Factor> fs;
    for (int k = 1; scaled(Var::q, k) < q_cut; ++k) {
        fs.push_back({ex(k, 0, 0), -8});
        if (k % 2 == 1) {
            for (auto [a, b] : {std::pair{0, -2}, {0, 2}, {1, 1}, {-1, 1}, {1, -1}, {-1, -1}}) {
                fs.push_back({ex(k, a, b), -1});
            }
            fs.push_back({ex(k, 0, 0), -2});
        }
    }
    return mul(keyeq_prefactor(), product_expand(fs, q_cut));
}

Series keyeq_rhs1_jacobi(int64_t q_cut, bool eta_prefactor)
{
    const Exponent u = ex(0, 0, 1);
    const Exponent u2 = ex(0, 0, 2);
    // eta(q)^{-16} starts at q^{-2/3}; work one order higher and truncate
    const int64_t W = q_cut + scaled(Var::q, 1);
    Series theta_u2 = divide_exact(theta(u2, 2, W), theta(u2, 1, W));
    Series etas = mul(eta_power(2, 8, W, eta_prefactor), eta_power(1, -16, W, eta_prefactor));
    Series pair = divide_exact(theta_pair(u, 2, W), theta_pair(u, 1, W));
    return mul(mul(keyeq_prefactor(), theta_u2), mul(etas, pair)).truncated(q_cut);
}

namespace {

// sum_d u^{-(2d+1)} sum_i (-u)^i b_{i,d} q^d
Series betti_sum(const BettiTable &betti, int64_t q_cut)
{
    std::vector<std::pair<Exponent, LinExpr>> terms;
    for (int d = 0; d <= max_degree(q_cut); ++d) {
        auto row = betti.row(d);
        for (int i = 0; i < static_cast<int>(row.size()); ++i) {
            terms.emplace_back(ex(d, 0, i - 2 * d - 1), row[i] * Rational(sign_of(i)));
        }
    }
    return Series::from_terms(terms, q_cut);
}

} // namespace

Series keyeq_rhs2(const BettiTable &betti, int64_t q_cut)
{
    std::vector<Factor> fs;
    for (int k = 1; scaled(Var::q, 2 * k) < q_cut; ++k) {
        fs.push_back({ex(2 * k, 0, 2), 1});
        fs.push_back({ex(2 * k, 0, -2), 1});
        fs.push_back({ex(2 * k, 0, 0), 2});
        for (auto [a, b] : {std::pair{1, 1}, {-1, -1}, {1, -1}, {-1, 1}}) {
            fs.push_back({ex(2 * k, a, b), -1});
        }
    }
    return mul(betti_sum(betti, q_cut), product_expand(fs, q_cut));
}

Series keyeq_difference(const BettiTable &betti, int64_t q_cut)
{
    return keyeq_rhs1(q_cut) - keyeq_rhs2(betti, q_cut);
}

// ------------------------------------------------------------------ tables

LinExpr PerverseTable::at(int i, int j) const
{
    auto it = entries.find({i, j});
    return it == entries.end() ? LinExpr() : it->second;
}

bool PerverseTable::all_determined() const
{
    return std::none_of(entries.begin(), entries.end(),
                        [](const auto &kv) { return kv.second.has_symbols(); });
}

std::string PerverseTable::to_markdown() const
{
    std::ostringstream os;
    os << "| i \\ j |";
    for (int j = j_lo; j <= j_hi; ++j) {
        os << ' ' << j << " |";
    }
    os << "\n|---|";
    for (int j = j_lo; j <= j_hi; ++j) {
        os << "---|";
    }
    os << '\n';
    for (int i = i_lo; i <= i_hi; ++i) {
        os << "| " << i << " |";
        for (int j = j_lo; j <= j_hi; ++j) {
            LinExpr v = at(i, j);
            if (v.has_symbols()) {
                os << " ? |";
            } else if (v.is_zero()) {
                os << "  |";
            } else {
                os << ' ' << v.constant().get_str() << " |";
            }
        }
        os << '\n';
    }
    return os.str();
}

std::string PerverseTable::to_csv() const
{
    std::ostringstream os;
    os << "i,j,value\n";
    for (int i = i_lo; i <= i_hi; ++i) {
        for (int j = j_lo; j <= j_hi; ++j) {
            LinExpr v = at(i, j);
            os << i << ',' << j << ',' << (v.has_symbols() ? std::string("?") : v.constant().get_str())
               << '\n';
        }
    }
    return os.str();
}

std::string PerverseTable::to_json() const
{
    nlohmann::json out;
    out["d"] = d;
    out["i_range"] = {i_lo, i_hi};
    out["j_range"] = {j_lo, j_hi};
    auto cells = nlohmann::json::array();
    for (int i = i_lo; i <= i_hi; ++i) {
        for (int j = j_lo; j <= j_hi; ++j) {
            LinExpr v = at(i, j);
            cells.push_back({{"i", i}, {"j", j}, {"determined", !v.has_symbols()}, {"value", linexpr_to_json(v)}});
        }
    }
    out["entries"] = cells;
    return dump(out);
}

namespace {

PerverseTable collect(const Series &slice, int d, int i_lo, int i_hi, int j_lo, int j_hi)
{
    PerverseTable t;
    t.d = d;
    t.i_lo = i_lo;
    t.i_hi = i_hi;
    t.j_lo = j_lo;
    t.j_hi = j_hi;
    for (const auto &[e, c] : slice.terms()) {
        if (e[0] != 0 || e[3] != 0 || e[4] != 0 || e[1] % 2 != 0 || e[2] % 2 != 0) {
            throw std::invalid_argument("table slice " + exponent_to_string(e) +
                                        " is not an integral (p,u) monomial");
        }
        const int i = e[1] / 2;
        const int j = e[2] / 2;
        LinExpr v = c * Rational(sign_of(i + j));
        if (i < i_lo || i > i_hi || j < j_lo || j > j_hi) {
            t.outside.push_back({{i, j}, v});
        } else {
            t.entries[{i, j}] = v;
        }
    }
    return t;
}

} // namespace

PerverseTable perverse_table_from(const Series &difference, int d)
{
    Series slice = coefficient(difference, {{Var::q, d}});
    return collect(slice, d, -(d + 1), d + 1, -d, d);
}

PerverseTable perverse_table(int d, const BettiTable &betti, int64_t q_cut)
{
    if (scaled(Var::q, d) >= q_cut) {
        throw OutsideValidWindow("q-order too small for table d = " + std::to_string(d));
    }
    return perverse_table_from(keyeq_difference(betti, q_cut), d);
}

PerverseTable perverse_table_from_gv(const Series &gv, int d)
{
    int imax = 0;
    int jmax = 0;
    for (const auto &[e, c] : gv.terms()) {
        imax = std::max(imax, std::abs(e[1]) / 2);
        jmax = std::max(jmax, std::abs(e[2]) / 2);
    }
    return collect(gv, d, -imax, imax, -jmax, jmax);
}

// --------------------------------------------------------- primitive chain

Series omega_half_integral(int64_t q_cut)
{
    const int64_t half = scaled(Var::q, Frac(1, 2));
    const Exponent x = exponent({{Var::t, 1}, {Var::s, 1}});
    const Exponent xinv = exponent({{Var::t, -1}, {Var::s, -1}});
    std::vector<Factor> fs;
    for (int n = 1; scaled(Var::q, n) < q_cut + half; ++n) {
        fs.push_back({add_e(ex(n, 0, 0), xinv), -1});
        fs.push_back({ex(n, 0, 0), -10});
        fs.push_back({add_e(ex(n, 0, 0), x), -1});
    }
    Series body = product_expand(fs, q_cut + half);
    return mul(m(exponent({{Var::q, Frac(-1, 2)}}), 8), body);
}

Series omega_integral(const BettiTable &betti, int64_t q_cut)
{
    return scale(betti_sum(betti, q_cut), -8);
}

namespace {

// [r] q^{r^2/2} + sum_{n>=1} [n+r] (p^n + p^{-n}) q^{rn + r^2/2}, r >= 1
Series r_block(int r, int64_t q_cut)
{
    Series out = Series::zero(q_cut);
    const int64_t base = scaled(Var::q, Frac(int64_t{r} * r, 2));
    if (base >= q_cut) {
        return out;
    }
    out = out + mul(m(exponent({{Var::q, Frac(int64_t{r} * r, 2)}})), quantum_integer(r));
    for (int n = 1; base + scaled(Var::q, int64_t{r} * n) < q_cut; ++n) {
        const Frac qe(2 * int64_t{r} * n + int64_t{r} * r, 2);
        Series pp = m(exponent({{Var::q, qe}, {Var::p, n}})) + m(exponent({{Var::q, qe}, {Var::p, -n}}));
        out = out + mul(pp, quantum_integer(n + r));
    }
    return out.truncated(q_cut);
}

struct ChainForms {
    Series form1, form2, form3, display, form3_betti;
};

} // namespace

ChainReport primitive_chain_check(int64_t q_cut, const BettiTable &betti, const ChainOptions &opts)
{
    ChainReport rep;
    const int64_t W = q_cut + scaled(Var::q, 2);
    const int64_t p_hi = scaled(Var::p, max_degree(q_cut) + 2);
    const Exponent x = exponent({{Var::t, 1}, {Var::s, 1}});
    const Exponent y = exponent({{Var::t, Frac(1, 2)}, {Var::s, Frac(1, 2)}});
    const Exponent u = ex(0, 0, 1);

    Series om_half = opts.zero_omega ? Series::zero(W) : omega_half_integral(W);
    Series om_int = opts.zero_omega ? Series::zero(W) : omega_integral(betti, W);

    // Form 1: sums over (r, n).
    Series odd = Series::zero(W);
    Series even = Series::zero(W);
    for (int r = 1; scaled(Var::q, Frac(int64_t{r} * r, 2)) < W; ++r) {
        (r % 2 == 1 ? odd : even) = (r % 2 == 1 ? odd : even) + r_block(r, W);
    }
    Series geo = Series::zero(kInf, PWindow::Ascending(p_hi));
    for (int n = 1; scaled(Var::p, n) <= p_hi; ++n) {
        geo = geo + mul(m(ex(0, n, 0)), quantum_integer(n));
    }
    Series form1 = (mul(om_half, odd) - mul(om_int, geo + even)).truncated(q_cut);

    // Form 2: theta / eta quotients with the Omega inputs kept.
    Series y_diff = m(y) - m(exponent({{Var::t, Frac(-1, 2)}, {Var::s, Frac(-1, 2)}}));
    Series T = divide_exact(theta(x, 2, W), y_diff);
    Series R = divide_exact(theta_pair(y, 2, W), theta_pair(y, 1, W));
    Series E = mul(eta_power(2, 8, W, opts.eta_prefactor), eta_power(1, -4, W, opts.eta_prefactor));
    Series second = mul(om_int, mul(T, theta_pair_inverse(y, 2, W, p_hi)));
    Series form2 = (mul(om_half, mul(T, mul(R, E))) - second).truncated(q_cut);

    rep.steps.push_back("form 1 vs form 2");
    if (auto mm = compare_on_common(form1, form2)) {
        rep.failing_step = rep.steps.back();
        rep.first = mm;
        return rep;
    }
    if (opts.zero_omega) {
        rep.steps.push_back("both forms vanish");
        if (!form1.is_zero() || !form2.is_zero()) {
            rep.failing_step = rep.steps.back();
            return rep;
        }
        rep.passed = true;
        return rep;
    }

    // Form 3: the half-integral Omega absorbed into eta and theta.
    const int64_t W3 = W + scaled(Var::q, 1);
    Series den3 = mul(eta_power(1, 12, W3, opts.eta_prefactor), theta(x, 1, W3));
    Series first3 = scale(divide_exact(theta(x, 2, W3), den3), 8);
    Series form3 = (mul(first3, mul(R, E)) - second).truncated(q_cut);
    rep.steps.push_back("form 1 vs form 3");
    if (auto mm = compare_on_common(form1, form3)) {
        rep.failing_step = rep.steps.back();
        rep.first = mm;
        return rep;
    }

    // Betti realization against the display built from u-thetas.
    const Exponent u2 = ex(0, 0, 2);
    Series d1 = divide_exact(theta(u2, 2, W), theta(u2, 1, W));
    Series d_eta = mul(eta_power(2, 8, W, opts.eta_prefactor), eta_power(1, -16, W, opts.eta_prefactor));
    Series d_pair = divide_exact(theta_pair(u, 2, W), theta_pair(u, 1, W));
    Series d_first = scale(mul(d1, mul(d_eta, d_pair)), 8);
    Series u_diff = m(u) - m(ex(0, 0, -1));
    Series d_second = mul(om_int, mul(divide_exact(theta(u2, 2, W), u_diff),
                                      theta_pair_inverse(u, 2, W, p_hi)));
    Series display = (d_first - d_second).truncated(q_cut);
    rep.steps.push_back("Betti realization of form 3 vs display");
    if (auto mm = compare_on_common(betti_realization(form3), display)) {
        rep.failing_step = rep.steps.back();
        rep.first = mm;
        return rep;
    }
    rep.passed = true;
    return rep;
}

// -------------------------------------------------------------- asymptotics

Series asympt_gf(int order)
{
    const int64_t cut = scaled(Var::q, order) + 1;
    std::vector<Factor> fs{{ex(2, 1, 1), 1}};
    for (int n = 1; scaled(Var::q, 2 * n) < cut; ++n) {
        fs.push_back({ex(2 * n, n + 1, n - 1), -1});
        fs.push_back({ex(2 * n, n - 1, n + 1), -1});
        fs.push_back({ex(2 * n, n, n), -10});
    }
    return product_expand(fs, cut);
}

Series betti_infty_gf(int order)
{
    const int64_t cut = scaled(Var::q, order) + 1;
    std::vector<Factor> fs{{ex(2, 0, 0), 1}};
    for (int n = 1; scaled(Var::q, 2 * n) < cut; ++n) {
        fs.push_back({ex(2 * n, 0, 0), -12});
    }
    return product_expand(fs, cut);
}

Rational asympt_coefficient(const Series &gf, int i, int j)
{
    const LinExpr c = gf.coeff(ex(i + j, i, j));
    if (scaled(Var::q, i + j) >= gf.q_cut()) {
        throw OutsideValidWindow("asymptotic series not expanded to total degree " +
                                 std::to_string(i + j));
    }
    return c.constant();
}

StabilizationReport stabilization_check(int d_lo, int d_hi, const BettiTable &betti)
{
    StabilizationReport rep;
    const int64_t cut = scaled(Var::q, d_hi) + 1;
    Series rhs1 = keyeq_rhs1(cut);
    Series rhs2 = keyeq_rhs2(betti, cut);
    Series diff = rhs1 - rhs2;
    Series gf = asympt_gf(2 * d_hi + 2);
    auto record = [&rep](std::vector<StabilizationEntry> &into, StabilizationEntry e) {
        e.ok = !e.got.has_symbols() && e.got.constant() == e.expected;
        rep.passed = rep.passed && e.ok;
        into.push_back(std::move(e));
    };
    for (int d = d_lo; d <= d_hi; ++d) {
        for (int i = 0; 2 * i < d; ++i) {
            for (int j = 0; 2 * j < d - 2; ++j) {
                LinExpr c = diff.coeff(ex(d, i - d - 1, j - d)) * Rational(sign_of(i + j + 1));
                record(rep.shifted, {d, i, j, c, asympt_coefficient(gf, i, j)});
            }
        }
    }
    for (int d = 0; d <= d_hi; ++d) {
        for (int i = -(d + 1); 2 * i < -d - 2; ++i) {
            for (int j = -d; 2 * j < -d - 2; ++j) {
                record(rep.second_term, {d, i, j, rhs2.coeff(ex(d, i, j)), 0});
            }
        }
    }
    // a_{ij} straight from rhs1, with the d from which the coefficient is constant
    for (int i = 0; 2 * i < d_hi; ++i) {
        for (int j = 0; 2 * j < d_hi - 2; ++j) {
            auto a_at = [&](int d) {
                return rhs1.coeff(ex(d, i - d - 1, j - d)) * Rational(sign_of(i + j + 1));
            };
            StabilizationEntry e{d_hi, i, j, a_at(d_hi), asympt_coefficient(gf, i, j)};
            e.onset = d_hi;
            while (e.onset > 0 && a_at(e.onset - 1) == e.got) {
                --e.onset;
            }
            record(rep.stable_a, std::move(e));
        }
    }
    return rep;
}

std::vector<ExtremalEntry> extremal_report(int d_max, const BettiTable &betti)
{
    Series diff = keyeq_difference(betti, scaled(Var::q, d_max) + 1);
    std::vector<ExtremalEntry> out;
    for (int d = 0; d <= d_max; ++d) {
        PerverseTable t = perverse_table_from(diff, d);
        for (int i = 0; i <= 2 * d + 2; ++i) {
            ExtremalEntry e{d, i, t.at(i - d - 1, -d), i % 2 == 0 ? 1 : 0, ExtremalStatus::Unknown};
            if (!e.value.has_symbols()) {
                e.status = e.value.constant() == e.conjectured ? ExtremalStatus::Match
                                                               : ExtremalStatus::Mismatch;
            }
            out.push_back(std::move(e));
        }
    }
    return out;
}

std::string to_string(ExtremalStatus s)
{
    switch (s) {
    case ExtremalStatus::Match:
        return "match";
    case ExtremalStatus::Mismatch:
        return "mismatch";
    case ExtremalStatus::Unknown:
        return "unknown";
    }
    return "unknown";
}

} // namespace mpt
