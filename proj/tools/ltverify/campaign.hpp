#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ltverify/config.hpp"
#include "ltverify/suites.hpp"

namespace ltv {

struct CampaignOptions {
    int jobs = 1;
    double budget_seconds = 0;  // 0: unlimited
};

struct SuiteRun {
    std::size_t case_index = 0;
    std::string suite;
    bool skipped = false;  // not started before the budget ran out
    std::vector<CheckResult> checks;
    double wall_ms = 0;  // including context, tower and sequence setup
};

struct CampaignResult {
    std::vector<SuiteRun> runs;  // case order, then suite order within a case
    int passed = 0, failed = 0, faulted = 0, skipped = 0;
    bool truncated() const { return skipped > 0; }
    // 1 on any failure or truncation, 2 on precision faults alone, 0 otherwise.
    int exit_code() const;
};

CampaignResult run_campaign(const CampaignConfig& cfg, const CampaignOptions& opt);
nlohmann::json report_json(const CampaignConfig& cfg, const CampaignResult& res);
// Report with every wall-clock field removed; identical across runs with the same seeds.
nlohmann::json strip_timing(nlohmann::json report);

}  // namespace ltv
