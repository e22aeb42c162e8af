#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ltverify/campaign.hpp"

namespace {

int cmd_validate(const std::string& path) {
    ltv::CampaignConfig cfg = ltv::load_config(path);
    ltv::validate(cfg);
    std::cout << "ok: " << cfg.cases.size() << " case(s)\n";
    return 0;
}

int cmd_run(const std::string& path, int jobs, double budget, const std::string& out) {
    ltv::CampaignConfig cfg = ltv::load_config(path);
    ltv::validate(cfg);
    ltv::CampaignResult res = ltv::run_campaign(cfg, {jobs, budget});
    const std::string text = ltv::report_json(cfg, res).dump(2) + "\n";
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        std::ofstream f(out);
        if (!f) throw ltv::ConfigError("cannot write " + out);
        f << text;
    }
    std::cerr << "passed " << res.passed << ", failed " << res.failed << ", precision faults " << res.faulted
              << (res.truncated() ? ", truncated by budget" : "") << "\n";
    return res.exit_code();
}

int cmd_explain(const std::string& name) {
    if (name.empty()) {
        for (const auto& c : ltv::check_registry()) std::cout << c.name << "  [" << c.suite << "]\n";
        return 0;
    }
    const ltv::CheckInfo* c = ltv::find_check(name);
    if (!c) {
        std::cerr << "unknown check '" << name << "'\n";
        return 3;
    }
    std::cout << c->name << "\n  suite:    " << c->suite << "\n  identity: " << c->anchor << "\n  " << c->description
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verification campaigns for Lubin-Tate towers, Coleman series and the explicit pairing"};
    app.require_subcommand(1);

    std::string path, out, check;
    int jobs = 1;
    double budget = 0;

    auto* validate = app.add_subcommand("validate", "Parse a campaign config and check every case");
    validate->add_option("config", path, "JSON campaign file")->required();

    auto* run = app.add_subcommand("run", "Run a campaign and write the JSON report");
    run->add_option("config", path, "JSON campaign file")->required();
    run->add_option("--jobs,-j", jobs, "Worker threads")->check(CLI::PositiveNumber);
    run->add_option("--budget", budget, "Wall-clock budget in seconds; suites not started in time are skipped")
        ->check(CLI::NonNegativeNumber);
    run->add_option("--out,-o", out, "Report path (default: stdout)");

    auto* explain = app.add_subcommand("explain", "Describe a check, or list all checks");
    explain->add_option("check", check, "Check name");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*validate) return cmd_validate(path);
        if (*run) return cmd_run(path, jobs, budget, out);
        return cmd_explain(check);
    } catch (const ltv::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    }
}
