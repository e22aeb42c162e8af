#pragma once

#include <string>
#include <vector>

#include "ltverify/config.hpp"

namespace ltv {

enum class Status { pass, fail, precision_fault };
const char* status_name(Status s);

struct CheckResult {
    std::string name;
    std::string instance;  // which character, generator or index the check ran on
    Status status = Status::pass;
    std::string lhs, rhs;  // both sides, as rationals mod 1 or base-p digit strings
    std::string detail;
    double wall_ms = 0;
};

struct CheckInfo {
    std::string name, suite, anchor, description;
};
const std::vector<CheckInfo>& check_registry();
const CheckInfo* find_check(const std::string& name);

std::vector<CheckResult> run_suite(const std::string& suite, const CaseConfig& c, const CaseEnv& env);

// Base-p digits of each coordinate, least significant first, "|" between coordinates.
std::string padic_digits(const ltc::RingContext& R, const ltc::FieldElement& x, int prec);

}  // namespace ltv
