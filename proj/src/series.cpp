#include "mpt/series.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mpt/kernels.hpp"

namespace mpt {

namespace {

int64_t sat_add(int64_t a, int64_t b)
{
    if (a >= kInf || b >= kInf) {
        return kInf;
    }
    if (a <= -kInf || b <= -kInf) {
        return -kInf;
    }
    return std::clamp(a + b, -kInf, kInf);
}

int64_t sat_mul(int64_t a, int64_t k)
{
    if (a >= kInf) {
        return kInf;
    }
    if (a <= -kInf) {
        return -kInf;
    }
    return std::clamp(a * k, -kInf, kInf);
}

Rest shifted(const Rest &r, const Rest &by)
{
    return {r[0] + by[0], r[1] + by[1], r[2] + by[2], r[3] + by[3]};
}

void drop_zeros(Poly &p)
{
    std::erase_if(p, [](const auto &kv) { return kv.second.is_zero(); });
}

bool rest_is_zero(const Rest &r) { return r == Rest{0, 0, 0, 0}; }

} // namespace

// ---------------------------------------------------------------- exponents

int32_t scaled(Var v, Frac e)
{
    if (e.den == 0) {
        throw std::invalid_argument("zero exponent denominator");
    }
    const int64_t d = kDenoms[static_cast<int>(v)];
    const int64_t top = e.num * d;
    if (top % e.den != 0) {
        throw std::invalid_argument("exponent " + std::to_string(e.num) + "/" +
                                    std::to_string(e.den) + " of " +
                                    std::string(kVarNames[static_cast<int>(v)]) +
                                    " is off the 1/" + std::to_string(d) + " lattice");
    }
    return static_cast<int32_t>(top / e.den);
}

Exponent exponent(std::initializer_list<std::pair<Var, Frac>> parts)
{
    Exponent e{};
    for (const auto &[v, f] : parts) {
        e[static_cast<int>(v)] += scaled(v, f);
    }
    return e;
}

Rational unscaled(Var v, int64_t scaled_exp)
{
    Rational r(static_cast<long>(scaled_exp), kDenoms[static_cast<int>(v)]);
    r.canonicalize();
    return r;
}

std::string exponent_to_string(const Exponent &e)
{
    std::ostringstream os;
    bool first = true;
    for (int k = 0; k < kNumVars; ++k) {
        if (e[k] == 0) {
            continue;
        }
        if (!first) {
            os << "*";
        }
        os << kVarNames[k];
        Rational x = unscaled(static_cast<Var>(k), e[k]);
        if (x != 1) {
            os << "^" << (x.get_den() == 1 ? x.get_str() : "(" + x.get_str() + ")");
        }
        first = false;
    }
    return first ? "1" : os.str();
}

// ------------------------------------------------------------------ windows

PWindow PWindow::Window(int64_t lo, int64_t hi)
{
    if (lo > hi) {
        throw std::invalid_argument("p-window with lo > hi");
    }
    PWindow w;
    w.exact = false;
    w.lo = std::max(lo, -kInf);
    w.hi = std::min(hi, kInf);
    return w;
}

PWindow intersect(const PWindow &a, const PWindow &b)
{
    if (a.exact) {
        return b;
    }
    if (b.exact) {
        return a;
    }
    int64_t lo = std::max(a.lo, b.lo);
    int64_t hi = std::min(a.hi, b.hi);
    if (lo > hi) {
        throw WindowUnderflow("p-windows [" + std::to_string(a.lo) + "," + std::to_string(a.hi) +
                              "] and [" + std::to_string(b.lo) + "," + std::to_string(b.hi) +
                              "] do not overlap");
    }
    return PWindow::Window(lo, hi);
}

std::string to_string(const PWindow &w)
{
    if (w.exact) {
        return "exact";
    }
    auto bound = [](int64_t x) {
        if (x <= -kInf) {
            return std::string("-inf");
        }
        if (x >= kInf) {
            return std::string("inf");
        }
        return unscaled(Var::p, x).get_str();
    };
    return "[" + bound(w.lo) + "," + bound(w.hi) + "]";
}

// ------------------------------------------------------------------- Series

Series Series::zero(int64_t q_cut, PWindow w)
{
    Series s;
    s.q_cut_ = q_cut;
    s.window_ = w;
    return s;
}

Series Series::constant(const LinExpr &c, int64_t q_cut)
{
    return monomial(Exponent{}, c, q_cut);
}

Series Series::monomial(const Exponent &e, const LinExpr &coef, int64_t q_cut)
{
    Series s;
    s.q_cut_ = q_cut;
    s.slices_[e[0]][rest_of(e)] = coef;
    s.normalize();
    return s;
}

Series Series::from_slices(SliceMap slices, int64_t q_cut, PWindow w)
{
    Series s;
    s.slices_ = std::move(slices);
    s.q_cut_ = q_cut;
    s.window_ = w;
    s.normalize();
    return s;
}

Series Series::from_terms(const std::vector<std::pair<Exponent, LinExpr>> &terms, int64_t q_cut,
                          PWindow w)
{
    SliceMap m;
    for (const auto &[e, c] : terms) {
        m[e[0]][rest_of(e)] += c;
    }
    return from_slices(std::move(m), q_cut, w);
}

void Series::normalize()
{
    for (auto it = slices_.begin(); it != slices_.end();) {
        if (it->first >= q_cut_) {
            it = slices_.erase(it, slices_.end());
            break;
        }
        Poly &p = it->second;
        std::erase_if(p, [this](const auto &kv) {
            return kv.second.is_zero() || !window_.contains(kv.first[0]);
        });
        it = p.empty() ? slices_.erase(it) : std::next(it);
    }
}

std::size_t Series::size() const
{
    std::size_t n = 0;
    for (const auto &[q, p] : slices_) {
        n += p.size();
    }
    return n;
}

bool Series::has_symbols() const
{
    for (const auto &[q, p] : slices_) {
        for (const auto &[r, c] : p) {
            if (c.has_symbols()) {
                return true;
            }
        }
    }
    return false;
}

LinExpr Series::coeff(const Exponent &e) const
{
    auto it = slices_.find(e[0]);
    if (it == slices_.end()) {
        return {};
    }
    auto jt = it->second.find(rest_of(e));
    return jt == it->second.end() ? LinExpr{} : jt->second;
}

std::vector<std::pair<Exponent, LinExpr>> Series::terms() const
{
    std::vector<std::pair<Exponent, LinExpr>> out;
    out.reserve(size());
    for (const auto &[q, p] : slices_) {
        for (const auto &[r, c] : p) {
            out.emplace_back(join(q, r), c);
        }
    }
    return out;
}

int64_t Series::q_floor() const { return slices_.empty() ? q_cut_ : slices_.begin()->first; }

std::optional<std::pair<int64_t, int64_t>> Series::p_support() const
{
    if (slices_.empty()) {
        return std::nullopt;
    }
    int64_t lo = kInf;
    int64_t hi = -kInf;
    for (const auto &[q, p] : slices_) {
        lo = std::min<int64_t>(lo, p.begin()->first[0]);
        hi = std::max<int64_t>(hi, p.rbegin()->first[0]);
    }
    return std::make_pair(lo, hi);
}

int64_t Series::p_floor() const
{
    if (!window_.lower_unbounded()) {
        return -kInf;
    }
    auto sup = p_support();
    int64_t lo = sup ? sup->first : kInf;
    if (!window_.exact) {
        lo = std::min(lo, sat_add(window_.hi, 1));
    }
    return lo;
}

Series Series::truncated(int64_t q_cut) const
{
    Series s = *this;
    s.q_cut_ = std::min(q_cut_, q_cut);
    s.normalize();
    return s;
}

Series Series::restricted(const PWindow &w) const
{
    Series s = *this;
    s.window_ = intersect(window_, w);
    s.normalize();
    return s;
}

Series Series::operator-() const
{
    Series s = *this;
    for (auto &[q, p] : s.slices_) {
        for (auto &[r, c] : p) {
            c = -c;
        }
    }
    return s;
}

std::string Mismatch::to_string() const
{
    return "coefficient of " + exponent_to_string(exp) + ": " + lhs.to_string() + " vs " +
           rhs.to_string();
}

std::optional<Mismatch> compare_on_common(const Series &a, const Series &b)
{
    const int64_t cut = std::min(a.q_cut(), b.q_cut());
    PWindow w;
    try {
        w = intersect(a.p_window(), b.p_window());
    } catch (const WindowUnderflow &) {
        return std::nullopt; // nothing in common
    }
    std::map<Exponent, std::pair<LinExpr, LinExpr>> diff;
    for (const auto &[e, c] : a.terms()) {
        if (e[0] < cut && w.contains(e[1])) {
            diff[e].first = c;
        }
    }
    for (const auto &[e, c] : b.terms()) {
        if (e[0] < cut && w.contains(e[1])) {
            diff[e].second = c;
        }
    }
    for (const auto &[e, pr] : diff) {
        if (!(pr.first == pr.second)) {
            return Mismatch{e, pr.first, pr.second};
        }
    }
    return std::nullopt;
}

std::string to_string(const Series &f)
{
    std::ostringstream os;
    bool first = true;
    for (const auto &[e, c] : f.terms()) {
        std::string cs = c.to_string();
        bool compound = c.has_symbols() && (sgn(c.constant()) != 0 || c.terms().size() > 1);
        if (!first) {
            os << " + ";
        }
        first = false;
        std::string mono = exponent_to_string(e);
        if (mono == "1") {
            os << (compound ? "(" + cs + ")" : cs);
        } else if (!c.has_symbols() && c.constant() == 1) {
            os << mono;
        } else if (!c.has_symbols() && c.constant() == -1) {
            os << "-" << mono;
        } else {
            os << (compound ? "(" + cs + ")" : cs) << "*" << mono;
        }
    }
    if (first) {
        os << "0";
    }
    if (f.q_cut() < kInf) {
        os << " + O(q^" << unscaled(Var::q, f.q_cut()).get_str() << ")";
    }
    if (!f.p_window().exact) {
        os << " [p valid in " << to_string(f.p_window()) << "]";
    }
    return os.str();
}

// --------------------------------------------------------------- arithmetic

Series add(const Series &f, const Series &g)
{
    Series::SliceMap out = f.slices();
    for (const auto &[q, p] : g.slices()) {
        Poly &dst = out[q];
        for (const auto &[r, c] : p) {
            dst[r] += c;
        }
    }
    return Series::from_slices(std::move(out), std::min(f.q_cut(), g.q_cut()),
                               intersect(f.p_window(), g.p_window()));
}

Series sub(const Series &f, const Series &g) { return add(f, -g); }

Series scale(const Series &f, const LinExpr &c)
{
    Series::SliceMap out = f.slices();
    for (auto &[q, p] : out) {
        for (auto &[r, v] : p) {
            v = v * c;
        }
    }
    return Series::from_slices(std::move(out), f.q_cut(), f.p_window());
}

namespace {

PWindow product_window(const Series &f, const Series &g)
{
    const PWindow &wf = f.p_window();
    const PWindow &wg = g.p_window();
    if (wf.exact && wg.exact) {
        return PWindow::Exact();
    }
    if (wf.exact || wg.exact) {
        const Series &ex = wf.exact ? f : g;
        const PWindow &w = wf.exact ? wg : wf;
        auto sup = ex.p_support();
        if (!sup) {
            return PWindow::Exact(); // exact zero factor
        }
        // Every coefficient at p = e needs the windowed factor at e - a for
        // all a in [sup.first, sup.second].
        int64_t lo = w.lo <= -kInf ? -kInf : sat_add(w.lo, sup->second);
        int64_t hi = sat_add(w.hi, sup->first);
        if (lo > hi) {
            throw WindowUnderflow("product leaves no valid p-range");
        }
        return PWindow::Window(lo, hi);
    }
    if (wf.lower_unbounded() && wg.lower_unbounded()) {
        int64_t hi = std::min(sat_add(wf.hi, g.p_floor()), sat_add(wg.hi, f.p_floor()));
        return PWindow::Ascending(hi);
    }
    throw WindowUnderflow("both operands carry a bounded p-window; one must be p-exact");
}

} // namespace

Series mul(const Series &f, const Series &g)
{
    PWindow w = product_window(f, g);
    int64_t cut = std::min(sat_add(f.q_cut(), g.q_floor()), sat_add(g.q_cut(), f.q_floor()));
    if (f.is_zero() || g.is_zero()) {
        return Series::zero(cut, w);
    }
    Series::SliceMap out = kernel::mode() == kernel::Mode::Serial
                               ? kernel::mul_reference(f.slices(), g.slices(), cut)
                               : kernel::mul_sliced(f.slices(), g.slices(), cut);
    return Series::from_slices(std::move(out), cut, w);
}

Series pow(const Series &f, unsigned k)
{
    Series result = Series::constant(1);
    Series base = f;
    while (k > 0) {
        if (k & 1U) {
            result = mul(result, base);
        }
        k >>= 1U;
        if (k > 0) {
            base = mul(base, base);
        }
    }
    return result;
}

// ----------------------------------------------------------------- division

std::optional<Poly> poly_divide_exact(const Poly &num, const Poly &den)
{
    if (den.empty()) {
        throw std::domain_error("division by the zero polynomial");
    }
    Poly quot;
    if (num.empty()) {
        return quot;
    }
    // Per-variable degree box the quotient must live in.
    Rest lo{};
    Rest hi{};
    for (int k = 0; k < 4; ++k) {
        int32_t nmin = INT32_MAX, nmax = INT32_MIN, dmin = INT32_MAX, dmax = INT32_MIN;
        for (const auto &[r, c] : num) {
            nmin = std::min(nmin, r[k]);
            nmax = std::max(nmax, r[k]);
        }
        for (const auto &[r, c] : den) {
            dmin = std::min(dmin, r[k]);
            dmax = std::max(dmax, r[k]);
        }
        lo[k] = nmin - dmin;
        hi[k] = nmax - dmax;
        if (lo[k] > hi[k]) {
            return std::nullopt;
        }
    }
    const auto &[lead_exp, lead_coef] = *den.rbegin();
    if (lead_coef.has_symbols()) {
        throw std::invalid_argument("divisor coefficients must be symbol-free");
    }
    const Rational lead = lead_coef.constant();

    Poly rem = num;
    while (!rem.empty()) {
        auto top = std::prev(rem.end());
        Rest qe{top->first[0] - lead_exp[0], top->first[1] - lead_exp[1],
                top->first[2] - lead_exp[2], top->first[3] - lead_exp[3]};
        for (int k = 0; k < 4; ++k) {
            if (qe[k] < lo[k] || qe[k] > hi[k]) {
                return std::nullopt;
            }
        }
        LinExpr qc = top->second / lead;
        for (const auto &[r, c] : den) {
            Rest target = shifted(r, qe);
            LinExpr &slot = rem[target];
            slot -= qc * c;
            if (slot.is_zero()) {
                rem.erase(target);
            }
        }
        quot.emplace(qe, std::move(qc));
    }
    return quot;
}

Series divide_exact(const Series &num, const Series &den, int64_t q_cap)
{
    if (den.is_zero()) {
        throw std::domain_error("division by the zero series");
    }
    if (den.has_symbols()) {
        throw std::invalid_argument("divisor must be symbol-free");
    }
    PWindow w = PWindow::Exact();
    if (!den.p_window().exact) {
        throw WindowUnderflow("divisor carries a p-window");
    }
    if (!num.p_window().exact) {
        auto sup = den.p_support();
        if (sup && (sup->first != 0 || sup->second != 0)) {
            throw WindowUnderflow("p-windowed numerator needs a p-free divisor");
        }
        w = num.p_window();
    }

    const auto &dslices = den.slices();
    const int64_t vd = dslices.begin()->first;
    const Poly &d0 = dslices.begin()->second;
    const int64_t vn = num.q_floor();

    int64_t cut = std::min({sat_add(num.q_cut(), -vd),
                            sat_add(den.q_cut(), sat_add(vn, -2 * vd)), q_cap});
    if (cut >= kInf && dslices.size() > 1) {
        throw std::invalid_argument("quotient is an infinite series; pass a q cutoff");
    }

    Series::SliceMap quot;
    std::set<int64_t> pending;
    for (const auto &[q, p] : num.slices()) {
        if (q - vd < cut) {
            pending.insert(q - vd);
        }
    }
    while (!pending.empty()) {
        const int64_t wq = *pending.begin();
        pending.erase(pending.begin());
        if (wq >= cut) {
            break;
        }
        Poly rem;
        if (auto it = num.slices().find(wq + vd); it != num.slices().end()) {
            rem = it->second;
        }
        for (auto it = std::next(dslices.begin()); it != dslices.end(); ++it) {
            auto gt = quot.find(wq + vd - it->first);
            if (gt != quot.end()) {
                Poly prod;
                kernel::poly_mul_add(prod, it->second, gt->second);
                for (auto &[r, c] : prod) {
                    rem[r] -= c;
                }
            }
        }
        drop_zeros(rem);
        if (!w.exact) {
            // p-free divisor: slices divide coefficientwise in the other variables.
            std::erase_if(rem, [&w](const auto &kv) { return !w.contains(kv.first[0]); });
        }
        if (rem.empty()) {
            continue;
        }
        auto g = poly_divide_exact(rem, d0);
        if (!g) {
            throw InexactDivision("nonzero remainder in the q^" +
                                  unscaled(Var::q, wq + vd).get_str() + " slice");
        }
        if (g->empty()) {
            continue;
        }
        quot.emplace(wq, std::move(*g));
        for (auto it = std::next(dslices.begin()); it != dslices.end(); ++it) {
            int64_t next = wq + it->first - vd;
            if (next < cut) {
                pending.insert(next);
            }
        }
    }
    return Series::from_slices(std::move(quot), cut, w);
}

Series invert(const Series &f, int64_t q_cap)
{
    if (f.is_zero()) {
        throw NonUnitLeadingTerm("zero series");
    }
    const Poly &lead = f.slices().begin()->second;
    if (lead.size() != 1 || lead.begin()->second.has_symbols()) {
        throw NonUnitLeadingTerm("lowest q-slice is not a single monomial with a rational coefficient");
    }
    return divide_exact(Series::constant(1), f, q_cap);
}

// ------------------------------------------------------ structural operations

Series adams(const Series &f, int k)
{
    if (k < 1) {
        throw std::invalid_argument("Adams operation needs k >= 1");
    }
    if (k == 1) {
        return f;
    }
    Series::SliceMap out;
    for (const auto &[q, p] : f.slices()) {
        Poly &dst = out[q * k];
        for (const auto &[r, c] : p) {
            dst.emplace(Rest{r[0] * k, r[1] * k, r[2] * k, r[3] * k}, c);
        }
    }
    PWindow w = f.p_window();
    if (!w.exact) {
        w = PWindow::Window(sat_mul(w.lo, k), sat_mul(w.hi, k));
    }
    return Series::from_slices(std::move(out), sat_mul(f.q_cut(), k), w);
}

Series specialize(const Series &f, const Substitution &map)
{
    for (const auto &[v, target] : map) {
        bool q_involved = target[0] != 0;
        if (v == Var::q) {
            if (target != exponent({{Var::q, 1}})) {
                throw TruncationLoss("q may not be substituted");
            }
            continue;
        }
        if (q_involved) {
            throw TruncationLoss("substitution mixes q into an exact variable");
        }
        if (!f.p_window().exact) {
            bool p_ok = v == Var::p ? target[1] == scaled(Var::p, 1) : target[1] == 0;
            if (!p_ok) {
                throw TruncationLoss("substitution would invalidate the p-window");
            }
        }
    }
    Series::SliceMap out;
    for (const auto &[q, p] : f.slices()) {
        Poly &dst = out[q];
        for (const auto &[r, c] : p) {
            Exponent src = join(q, r);
            Exponent e{};
            e[0] = src[0];
            for (int k = 1; k < kNumVars; ++k) {
                auto it = map.find(static_cast<Var>(k));
                if (it == map.end()) {
                    e[k] += src[k];
                    continue;
                }
                for (int j = 1; j < kNumVars; ++j) {
                    int64_t top = int64_t{src[k]} * it->second[j];
                    if (top % kDenoms[k] != 0) {
                        throw std::invalid_argument("substitution leaves the exponent lattice");
                    }
                    e[j] += static_cast<int32_t>(top / kDenoms[k]);
                }
            }
            dst[rest_of(e)] += c;
        }
    }
    return Series::from_slices(std::move(out), f.q_cut(), f.p_window());
}

Series coefficient(const Series &f, const std::map<Var, Frac> &constraints)
{
    Exponent want{};
    std::array<bool, kNumVars> fixed{};
    for (const auto &[v, x] : constraints) {
        int k = static_cast<int>(v);
        want[k] = scaled(v, x);
        fixed[k] = true;
    }
    if (fixed[0] && want[0] >= f.q_cut()) {
        throw OutsideValidWindow("q^" + unscaled(Var::q, want[0]).get_str() +
                                 " is beyond the truncation order");
    }
    if (fixed[1] && !f.p_window().contains(want[1])) {
        throw OutsideValidWindow("p^" + unscaled(Var::p, want[1]).get_str() +
                                 " is outside the valid p-window " + to_string(f.p_window()));
    }
    std::vector<std::pair<Exponent, LinExpr>> out;
    for (const auto &[e, c] : f.terms()) {
        bool match = true;
        for (int k = 0; k < kNumVars && match; ++k) {
            match = !fixed[k] || e[k] == want[k];
        }
        if (match) {
            Exponent r = e;
            for (int k = 0; k < kNumVars; ++k) {
                if (fixed[k]) {
                    r[k] = 0;
                }
            }
            out.emplace_back(r, c);
        }
    }
    return Series::from_terms(out, fixed[0] ? kInf : f.q_cut(),
                              fixed[1] ? PWindow::Exact() : f.p_window());
}

// ------------------------------------------------------------------ exp/log

namespace {

// Validity for exp/log of a windowed series. A q-weight w term is built from
// at most w / q_floor factors, each of which can pull unknown terms down by
// -p_floor when that is negative.
struct PowerWindow {
    PWindow base;
    int64_t floor = 0;
    int64_t step = 1;

    PWindow at(int64_t w) const
    {
        if (base.exact || floor >= 0) {
            return base;
        }
        return PWindow::Ascending(base.hi + (w / step - 1) * floor);
    }
};

PowerWindow power_window(const Series &f, const char *op)
{
    const PWindow &w = f.p_window();
    if (!w.lower_unbounded()) {
        throw WindowUnderflow(std::string(op) + " of a series with a bounded-below p-window");
    }
    if (w.exact || f.is_zero()) {
        return {w};
    }
    return {w, f.p_floor(), std::max<int64_t>(1, f.q_floor())};
}

void prune_to(Poly &p, const PWindow &w)
{
    if (!w.exact) {
        std::erase_if(p, [&w](const auto &kv) { return !w.contains(kv.first[0]); });
    }
    drop_zeros(p);
}

} // namespace

Series exp_series(const Series &f)
{
    if (!f.is_zero() && f.slices().begin()->first <= 0) {
        throw BadConstantTerm("exp needs a series without q-weight <= 0 terms");
    }
    const PowerWindow pw = power_window(f, "exp");
    const int64_t cut = f.q_cut();
    if (f.is_zero()) {
        return Series::from_slices({{0, {{Rest{}, LinExpr(1)}}}}, cut, pw.base);
    }
    if (cut >= kInf) {
        throw std::invalid_argument("exp of an untruncated series; truncate in q first");
    }
    // q d/dq E = E * q d/dq f, solved slice by slice.
    std::vector<std::pair<int64_t, Poly>> df;
    for (const auto &[q, p] : f.slices()) {
        Poly scaled_p = p;
        for (auto &[r, c] : scaled_p) {
            c *= Rational(static_cast<long>(q));
        }
        df.emplace_back(q, std::move(scaled_p));
    }
    Series::SliceMap e;
    e[0][Rest{}] = 1;
    std::set<int64_t> pending;
    for (const auto &[q, p] : df) {
        pending.insert(q);
    }
    while (!pending.empty()) {
        const int64_t w = *pending.begin();
        pending.erase(pending.begin());
        if (w >= cut) {
            break;
        }
        Poly acc;
        for (const auto &[q, p] : df) {
            if (q > w) {
                break;
            }
            auto it = e.find(w - q);
            if (it != e.end()) {
                kernel::poly_mul_add(acc, p, it->second);
            }
        }
        for (auto &[r, c] : acc) {
            c /= Rational(static_cast<long>(w));
        }
        prune_to(acc, pw.at(w));
        if (acc.empty()) {
            continue;
        }
        e.emplace(w, std::move(acc));
        for (const auto &[q, p] : df) {
            if (w + q < cut) {
                pending.insert(w + q);
            }
        }
    }
    return Series::from_slices(std::move(e), cut, pw.at(cut - 1));
}

Series log_series(const Series &f)
{
    const auto &sl = f.slices();
    auto zero = sl.find(0);
    bool ok = !sl.empty() && sl.begin()->first == 0 && zero->second.size() == 1 &&
              rest_is_zero(zero->second.begin()->first) && zero->second.begin()->second == LinExpr(1);
    if (!ok) {
        throw BadConstantTerm("log needs lowest q-slice exactly 1");
    }
    Series g = sub(f, Series::constant(1));
    const PowerWindow pw = power_window(g, "log");
    const int64_t cut = f.q_cut();
    if (g.is_zero()) {
        return Series::zero(cut, pw.base);
    }
    if (cut >= kInf) {
        throw std::invalid_argument("log of an untruncated series; truncate in q first");
    }
    // w L_w = w G_w - sum_{0<v<w} v L_v G_{w-v}
    Series::SliceMap l;
    std::set<int64_t> pending;
    for (const auto &[q, p] : g.slices()) {
        pending.insert(q);
    }
    while (!pending.empty()) {
        const int64_t w = *pending.begin();
        pending.erase(pending.begin());
        if (w >= cut) {
            break;
        }
        Poly acc;
        for (const auto &[v, lv] : l) {
            if (v >= w) {
                break;
            }
            auto it = g.slices().find(w - v);
            if (it == g.slices().end()) {
                continue;
            }
            Poly prod;
            kernel::poly_mul_add(prod, lv, it->second);
            const Rational k = ratio(static_cast<long>(v), static_cast<long>(w));
            for (auto &[r, c] : prod) {
                acc[r] -= c * k;
            }
        }
        if (auto it = g.slices().find(w); it != g.slices().end()) {
            for (const auto &[r, c] : it->second) {
                acc[r] += c;
            }
        }
        prune_to(acc, pw.at(w));
        if (acc.empty()) {
            continue;
        }
        l.emplace(w, std::move(acc));
        for (const auto &[q, p] : g.slices()) {
            if (w + q < cut) {
                pending.insert(w + q);
            }
        }
    }
    return Series::from_slices(std::move(l), cut, pw.at(cut - 1));
}

// ---------------------------------------------------------------- products

Series product_expand(const std::vector<Factor> &factors, int64_t q_cut)
{
    return product_expand_onto(Series::constant(1, q_cut), factors);
}

Series product_expand_onto(Series base, const std::vector<Factor> &factors)
{
    const int64_t cut = base.q_cut();
    for (const auto &fac : factors) {
        if (fac.mono[0] <= 0) {
            throw NonConvergentFactor("factor (1 - " + exponent_to_string(fac.mono) +
                                      ") has q-weight <= 0");
        }
    }
    if (cut >= kInf) {
        throw std::invalid_argument("infinite product needs a q cutoff");
    }
    if (!base.p_window().exact) {
        // Windowed bases go through mul so the p-window rule is applied.
        for (const auto &fac : factors) {
            if (fac.mono[1] == 0) {
                continue;
            }
            base = mul(base, product_expand({fac}, cut));
        }
        std::vector<Factor> rest;
        std::copy_if(factors.begin(), factors.end(), std::back_inserter(rest),
                     [](const Factor &f) { return f.mono[1] == 0; });
        if (rest.empty()) {
            return base;
        }
        PWindow w = base.p_window();
        Series exact_part = Series::from_slices(base.slices(), base.q_cut(), PWindow::Exact());
        Series r = product_expand_onto(exact_part, rest);
        return Series::from_slices(r.slices(), r.q_cut(), w);
    }

    Series::SliceMap s = base.slices();
    for (const auto &fac : factors) {
        const int64_t mq = fac.mono[0];
        const Rest mr = rest_of(fac.mono);
        if (s.empty() || s.begin()->first + mq >= cut) {
            continue;
        }
        for (int rep = 0; rep < std::abs(fac.exponent); ++rep) {
            if (fac.exponent > 0) {
                // multiply by (1 - c x^m): descending so sources are unmodified
                std::vector<int64_t> keys;
                for (const auto &[q, p] : s) {
                    keys.push_back(q);
                }
                for (auto it = keys.rbegin(); it != keys.rend(); ++it) {
                    const int64_t q = *it;
                    if (q + mq >= cut) {
                        continue;
                    }
                    Poly &dst = s[q + mq];
                    for (const auto &[r, c] : s.at(q)) {
                        dst[shifted(r, mr)] -= c * fac.coef;
                    }
                }
            } else {
                // divide by (1 - c x^m): ascending, reusing updated slices
                for (auto it = s.begin(); it != s.end(); ++it) {
                    const int64_t q = it->first;
                    if (q + mq >= cut) {
                        break;
                    }
                    drop_zeros(it->second);
                    Poly &dst = s[q + mq];
                    for (const auto &[r, c] : it->second) {
                        dst[shifted(r, mr)] += c * fac.coef;
                    }
                }
            }
            for (auto &[q, p] : s) {
                drop_zeros(p);
            }
        }
    }
    return Series::from_slices(std::move(s), cut, PWindow::Exact());
}

Series product_expand_p(const std::vector<Factor> &factors, int64_t p_hi)
{
    for (const auto &fac : factors) {
        if (fac.mono[0] != 0 || fac.mono[1] <= 0) {
            throw NonConvergentFactor("p-adic factor (1 - " + exponent_to_string(fac.mono) +
                                      ") needs zero q-weight and positive p-weight");
        }
    }
    Poly poly{{Rest{}, LinExpr(1)}};
    for (const auto &fac : factors) {
        const Rest mr = rest_of(fac.mono);
        for (int rep = 0; rep < std::abs(fac.exponent); ++rep) {
            if (fac.exponent > 0) {
                Poly next = poly;
                for (const auto &[r, c] : poly) {
                    Rest t = shifted(r, mr);
                    if (t[0] <= p_hi) {
                        next[t] -= c * fac.coef;
                    }
                }
                poly = std::move(next);
            } else {
                // Keys are ordered with p first, so shifted targets come later.
                for (auto it = poly.begin(); it != poly.end(); ++it) {
                    Rest t = shifted(it->first, mr);
                    if (t[0] <= p_hi) {
                        poly[t] += it->second * fac.coef;
                    }
                }
            }
            drop_zeros(poly);
        }
    }
    return Series::from_slices({{0, std::move(poly)}}, kInf, PWindow::Ascending(p_hi));
}

} // namespace mpt
