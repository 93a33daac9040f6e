#pragma once

// Canonical JSON for coefficients, series and DT tables.
//
// Series layout:
//   {"vars": [...], "denoms": [...], "q_order": "r/s" | "inf",
//    "p_window": "exact" | {"lo": int|null, "hi": int},
//    "terms": [{"exp": [scaled ints], "coef": {"const": "r/s", "terms": [...]}}]}
// Exponents and window bounds are in scaled units; q_order is the exclusive
// q cutoff as a true exponent.

#include <string>

#include "json.hpp"
#include "mpt/enriques.hpp"
#include "mpt/ring.hpp"
#include "mpt/series.hpp"

namespace mpt {

nlohmann::json linexpr_to_json(const LinExpr &e);
LinExpr linexpr_from_json(const nlohmann::json &j);

nlohmann::json series_to_json(const Series &f);
Series series_from_json(const nlohmann::json &j);

// [{"r","d","n","type","num","den"}], num/den as series JSON.
nlohmann::json dt_table_to_json(const DTTable &t);

// Two-space indented dump with a trailing newline.
std::string dump(const nlohmann::json &j);

} // namespace mpt
