#include "mpt/ring.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace mpt {

Rational parse_rational(std::string_view text)
{
    if (text.empty()) {
        throw std::invalid_argument("empty rational");
    }
    for (char c : text) {
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '/')) {
            throw std::invalid_argument("malformed rational: " + std::string(text));
        }
    }
    std::string s(text);
    if (s.front() == '+') {
        s.erase(0, 1);
    }
    Rational r;
    if (r.set_str(s, 10) != 0) {
        throw std::invalid_argument("malformed rational: " + std::string(text));
    }
    if (sgn(r.get_den()) == 0) {
        throw std::invalid_argument("zero denominator: " + std::string(text));
    }
    r.canonicalize();
    return r;
}

std::string rational_to_string(const Rational &r)
{
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

BettiSymbol::BettiSymbol(int d_, int i_) : d(d_), i(i_)
{
    if (d < 0 || i < 0 || i > 4 * d + 2) {
        throw std::invalid_argument("Betti symbol out of range: b_{" + std::to_string(i) + "," +
                                    std::to_string(d) + "}");
    }
}

std::string to_string(const BettiSymbol &s)
{
    return "b_{" + std::to_string(s.i) + "," + std::to_string(s.d) + "}";
}

LinExpr LinExpr::symbol(BettiSymbol s, const Rational &coef)
{
    LinExpr e;
    if (sgn(coef) != 0) {
        e.terms_.emplace_back(s, coef);
    }
    return e;
}

Rational LinExpr::coefficient(const BettiSymbol &s) const
{
    auto it = std::lower_bound(terms_.begin(), terms_.end(), s,
                               [](const Term &t, const BettiSymbol &k) { return t.first < k; });
    if (it != terms_.end() && it->first == s) {
        return it->second;
    }
    return 0;
}

namespace {

// Merge two sorted term lists, o scaled by `sign`.
std::vector<LinExpr::Term> merge_terms(const std::vector<LinExpr::Term> &a,
                                       const std::vector<LinExpr::Term> &b, int sign)
{
    std::vector<LinExpr::Term> out;
    out.reserve(a.size() + b.size());
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            out.push_back(*ia++);
        } else if (ia == a.end() || ib->first < ia->first) {
            out.emplace_back(ib->first, sign > 0 ? ib->second : Rational(-ib->second));
            ++ib;
        } else {
            Rational v = sign > 0 ? Rational(ia->second + ib->second) : Rational(ia->second - ib->second);
            if (sgn(v) != 0) {
                out.emplace_back(ia->first, std::move(v));
            }
            ++ia;
            ++ib;
        }
    }
    return out;
}

} // namespace

LinExpr &LinExpr::operator+=(const LinExpr &o)
{
    constant_ += o.constant_;
    if (!o.terms_.empty()) {
        terms_ = merge_terms(terms_, o.terms_, +1);
    }
    return *this;
}

LinExpr &LinExpr::operator-=(const LinExpr &o)
{
    constant_ -= o.constant_;
    if (!o.terms_.empty()) {
        terms_ = merge_terms(terms_, o.terms_, -1);
    }
    return *this;
}

LinExpr &LinExpr::operator*=(const Rational &k)
{
    constant_ *= k;
    if (sgn(k) == 0) {
        terms_.clear();
    } else {
        for (auto &t : terms_) {
            t.second *= k;
        }
    }
    return *this;
}

LinExpr &LinExpr::operator/=(const Rational &k)
{
    if (sgn(k) == 0) {
        throw std::domain_error("LinExpr division by zero");
    }
    constant_ /= k;
    for (auto &t : terms_) {
        t.second /= k;
    }
    return *this;
}

LinExpr LinExpr::operator-() const
{
    LinExpr r = *this;
    r.constant_ = -r.constant_;
    for (auto &t : r.terms_) {
        t.second = -t.second;
    }
    return r;
}

LinExpr operator*(const LinExpr &a, const LinExpr &b)
{
    if (a.has_symbols() && b.has_symbols()) {
        throw SymbolDegreeOverflow(a.to_string() + " * " + b.to_string());
    }
    if (!a.has_symbols()) {
        return LinExpr(b) *= a.constant_;
    }
    return LinExpr(a) *= b.constant_;
}

bool operator==(const LinExpr &a, const LinExpr &b)
{
    return a.constant_ == b.constant_ && a.terms_ == b.terms_;
}

void add_product(LinExpr &acc, const LinExpr &a, const LinExpr &b)
{
    if (!a.has_symbols() && !b.has_symbols()) {
        // Hot path: plain rationals.
        thread_local Rational tmp;
        mpq_mul(tmp.get_mpq_t(), a.constant_.get_mpq_t(), b.constant_.get_mpq_t());
        acc.constant_ += tmp;
        return;
    }
    acc += a * b;
}

Rational LinExpr::substitute(const std::function<Rational(const BettiSymbol &)> &value) const
{
    Rational r = constant_;
    for (const auto &[s, c] : terms_) {
        r += c * value(s);
    }
    return r;
}

LinExpr LinExpr::partial_substitute(
    const std::function<std::optional<Rational>(const BettiSymbol &)> &value) const
{
    LinExpr r(constant_);
    for (const auto &[s, c] : terms_) {
        if (auto v = value(s)) {
            r.constant_ += c * *v;
        } else {
            r.terms_.emplace_back(s, c);
        }
    }
    return r;
}

std::string LinExpr::to_string() const
{
    std::ostringstream os;
    bool first = true;
    if (sgn(constant_) != 0 || terms_.empty()) {
        os << constant_.get_str();
        first = false;
    }
    for (const auto &[s, c] : terms_) {
        if (!first) {
            os << (sgn(c) < 0 ? " - " : " + ");
        } else if (sgn(c) < 0) {
            os << "-";
        }
        Rational a = abs(c);
        if (a != 1) {
            os << a.get_str() << "*";
        }
        os << mpt::to_string(s);
        first = false;
    }
    return os.str();
}

LinExpr lin_add(const LinExpr &a, const LinExpr &b) { return a + b; }

LinExpr lin_mul(const LinExpr &a, const LinExpr &b) { return a * b; }

std::ostream &operator<<(std::ostream &os, const LinExpr &e) { return os << e.to_string(); }

} // namespace mpt
