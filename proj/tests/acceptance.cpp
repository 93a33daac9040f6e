// Acceptance criteria 1-14. Without arguments every criterion is run and one
// line is printed per criterion; with a number only that criterion runs.

#include <cstdlib>
#include <iostream>
#include <string>

#include "mpt/checks.hpp"

int main(int argc, char **argv)
{
    const int only = argc > 1 ? std::atoi(argv[1]) : 0;
    mpt::CheckConfig config;
    bool all = true;
    for (const auto &info : mpt::check_catalog()) {
        if (only != 0 && info.criterion != only) {
            continue;
        }
        mpt::CheckResult r = mpt::run_check(info.name, config);
        all = all && r.passed;
        std::cout << "criterion " << info.criterion << " [" << info.name << "]: "
                  << (r.passed ? "PASS" : "FAIL");
        if (r.first_mismatch) {
            std::cout << " -- " << *r.first_mismatch;
        } else if (!r.detail.empty() && r.detail.find('\n') == std::string::npos) {
            std::cout << " (" << r.detail << ")";
        }
        std::cout << '\n';
    }
    return all ? 0 : 1;
}
