#include "mpt/json_io.hpp"

#include <stdexcept>

namespace mpt {

using nlohmann::json;

json linexpr_to_json(const LinExpr &e)
{
    json terms = json::array();
    for (const auto &[s, c] : e.terms()) {
        terms.push_back({{"d", s.d}, {"i", s.i}, {"coef", rational_to_string(c)}});
    }
    return {{"const", rational_to_string(e.constant())}, {"terms", terms}};
}

LinExpr linexpr_from_json(const json &j)
{
    if (j.is_number_integer()) {
        return LinExpr(j.get<long>());
    }
    if (j.is_string()) {
        return parse_rational(j.get<std::string>());
    }
    LinExpr e = parse_rational(j.at("const").get<std::string>());
    if (j.contains("terms")) {
        for (const auto &t : j.at("terms")) {
            e += LinExpr::symbol(BettiSymbol(t.at("d").get<int>(), t.at("i").get<int>()),
                                 parse_rational(t.at("coef").get<std::string>()));
        }
    }
    return e;
}

json series_to_json(const Series &f)
{
    json out;
    out["vars"] = json::array();
    out["denoms"] = json::array();
    for (int k = 0; k < kNumVars; ++k) {
        out["vars"].push_back(std::string(kVarNames[k]));
        out["denoms"].push_back(kDenoms[k]);
    }
    out["q_order"] = f.q_cut() >= kInf ? json("inf")
                                        : json(rational_to_string(unscaled(Var::q, f.q_cut())));
    const PWindow &w = f.p_window();
    if (w.exact) {
        out["p_window"] = "exact";
    } else {
        out["p_window"] = {{"lo", w.lo <= -kInf ? json(nullptr) : json(w.lo)}, {"hi", w.hi}};
    }
    json terms = json::array();
    for (const auto &[e, c] : f.terms()) {
        terms.push_back({{"exp", std::vector<int32_t>(e.begin(), e.end())}, {"coef", linexpr_to_json(c)}});
    }
    out["terms"] = terms;
    return out;
}

Series series_from_json(const json &j)
{
    if (j.contains("denoms") &&
        j.at("denoms").get<std::vector<int>>() != std::vector<int>(kDenoms.begin(), kDenoms.end())) {
        throw std::invalid_argument("series JSON uses different exponent denominators");
    }
    int64_t cut = kInf;
    if (const auto &q = j.at("q_order"); q != "inf") {
        Rational r = parse_rational(q.get<std::string>()) * kDenoms[0];
        if (r.get_den() != 1) {
            throw std::invalid_argument("q_order off the exponent lattice");
        }
        cut = r.get_num().get_si();
    }
    PWindow w;
    if (const auto &pw = j.at("p_window"); pw != "exact") {
        w = PWindow::Window(pw.at("lo").is_null() ? -kInf : pw.at("lo").get<int64_t>(),
                            pw.at("hi").get<int64_t>());
    }
    std::vector<std::pair<Exponent, LinExpr>> terms;
    for (const auto &t : j.at("terms")) {
        auto v = t.at("exp").get<std::vector<int32_t>>();
        if (v.size() != kNumVars) {
            throw std::invalid_argument("exponent vector has the wrong length");
        }
        Exponent e{};
        std::copy(v.begin(), v.end(), e.begin());
        terms.emplace_back(e, linexpr_from_json(t.at("coef")));
    }
    return Series::from_terms(terms, cut, w);
}

json dt_table_to_json(const DTTable &t)
{
    json out = json::array();
    for (const auto &[k, v] : t) {
        out.push_back({{"r", k.r},
                       {"d", k.d},
                       {"n", k.n},
                       {"type", k.type},
                       {"num", series_to_json(v.num)},
                       {"den", series_to_json(v.den)}});
    }
    return out;
}

std::string dump(const json &j) { return j.dump(2) + "\n"; }

} // namespace mpt
