#include "ltverify/campaign.hpp"

#include <atomic>
#include <chrono>
#include <thread>

namespace ltv {

int CampaignResult::exit_code() const {
    if (failed > 0 || truncated()) return 1;
    if (faulted > 0) return 2;
    return 0;
}

CampaignResult run_campaign(const CampaignConfig& cfg, const CampaignOptions& opt) {
    CampaignResult res;
    for (std::size_t i = 0; i < cfg.cases.size(); ++i)
        for (const auto& s : cfg.cases[i].suites) res.runs.push_back({i, s, false, {}});

    const auto t0 = std::chrono::steady_clock::now();
    auto out_of_budget = [&] {
        if (opt.budget_seconds <= 0) return false;
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() > opt.budget_seconds;
    };
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < res.runs.size();) {
            SuiteRun& r = res.runs[k];
            if (out_of_budget()) {
                r.skipped = true;
                continue;
            }
            const CaseConfig& c = cfg.cases[r.case_index];
            const auto s0 = std::chrono::steady_clock::now();
            try {
                CaseEnv env = prepare_case(c);
                r.checks = run_suite(r.suite, c, env);
            } catch (const std::exception& e) {
                r.checks.push_back({r.suite + ".setup", "", Status::fail, "", "", e.what(), 0});
            }
            r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - s0).count();
        }
    };
    const int jobs = std::max(1, opt.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    for (const auto& r : res.runs) {
        res.skipped += r.skipped;
        for (const auto& c : r.checks) {
            if (c.status == Status::pass) ++res.passed;
            else if (c.status == Status::fail) ++res.failed;
            else ++res.faulted;
        }
    }
    return res;
}

nlohmann::json report_json(const CampaignConfig& cfg, const CampaignResult& res) {
    using nlohmann::json;
    json cases = json::array();
    for (std::size_t i = 0; i < cfg.cases.size(); ++i) {
        json suites = json::array();
        double case_ms = 0;
        for (const auto& r : res.runs) {
            if (r.case_index != i) continue;
            json checks = json::array();
            for (const auto& c : r.checks) {
                const CheckInfo* info = find_check(c.name);
                checks.push_back({{"check", c.name},
                                  {"instance", c.instance},
                                  {"anchor", info ? info->anchor : "suite setup"},
                                  {"status", status_name(c.status)},
                                  {"lhs", c.lhs},
                                  {"rhs", c.rhs},
                                  {"detail", c.detail},
                                  {"wall_ms", c.wall_ms}});
            }
            case_ms += r.wall_ms;
            suites.push_back({{"suite", r.suite}, {"skipped", r.skipped}, {"checks", checks}, {"wall_ms", r.wall_ms}});
        }
        cases.push_back({{"input", echo_case(cfg.cases[i])}, {"suites", suites}, {"wall_ms", case_ms}});
    }
    return {{"schema_version", 1},
            {"cases", cases},
            {"summary",
             {{"passed", res.passed},
              {"failed", res.failed},
              {"precision_faults", res.faulted},
              {"skipped_suites", res.skipped},
              {"truncated", res.truncated()},
              {"exit_code", res.exit_code()}}}};
}

nlohmann::json strip_timing(nlohmann::json report) {
    if (report.is_object()) {
        report.erase("wall_ms");
        for (auto& [k, v] : report.items()) v = strip_timing(v);
    } else if (report.is_array()) {
        for (auto& v : report) v = strip_timing(v);
    }
    return report;
}

}  // namespace ltv
