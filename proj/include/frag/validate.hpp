#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace frag {

// one report line: check,measured,expected,tol,pass
struct CheckResult {
    std::string name;
    double measured = 0.0;
    double expected = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct CriterionReport {
    int id = 0;
    std::string group;
    std::string title;
    std::vector<CheckResult> checks;
    bool passed() const;
};

// 1..13
std::vector<int> criterion_ids();
const char* criterion_group(int id);
const char* criterion_title(int id);

// A criterion whose computation throws is reported as a single failing check
// named after the exception.
CriterionReport run_criterion(int id, std::uint64_t seed = 0);

// comma separated tokens, each a group name or a criterion number; empty matches all
bool filter_matches(const std::string& filter, int id);

std::string report_header();
std::string format_check(const CheckResult& c);  // 17 significant digits

}  // namespace frag
