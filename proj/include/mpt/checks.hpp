#pragma once

// Named identity checks, one per acceptance criterion, with a JSON report.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mpt/enriques.hpp"
#include "mpt/perverse.hpp"

namespace mpt {

struct CheckConfig {
    // "Exact through q^N" override for the series-based checks.
    std::optional<int> q_order;
    bool eta_prefactor = true;
    BettiTable betti;
    HodgeInputs hodge = HodgeInputs::defaults();
};

struct CheckResult {
    std::string name;
    int criterion = 0;
    bool passed = false;
    std::string detail;
    std::optional<std::string> first_mismatch;
};

struct CheckInfo {
    int criterion;
    std::string name;
    std::string summary;
};
const std::vector<CheckInfo> &check_catalog();

// Throws std::invalid_argument for an unknown name.
CheckResult run_check(const std::string &name, const CheckConfig &config);
std::vector<CheckResult> run_checks(const std::vector<std::string> &names, const CheckConfig &config);

nlohmann::json report_json(const std::vector<CheckResult> &results);

} // namespace mpt
