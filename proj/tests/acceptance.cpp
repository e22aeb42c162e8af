// One line per acceptance criterion.  Exit status 0 only when every criterion passes.
#include <chrono>
#include <cstdio>
#include <functional>
#include <algorithm>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ltverify/campaign.hpp"

namespace {

using ltv::CaseConfig;
using ltv::CampaignConfig;
using ltv::CampaignResult;
using ltv::CheckResult;
using ltv::Status;

// Pinned thresholds.  Every comparison inside a check is exact (equality of residues modulo the
// reported power of p, or of rationals mod 1); the floors below keep those powers meaningful.
constexpr int kMinDigits = 3;            // no identity may be certified modulo less than p^3
constexpr int kFrameSamples = 20;        // random a per frame
constexpr int kFrameDegree = 700;        // univariate truncation for [a]_f
constexpr int kNormSamples = 50;         // random series per frame
constexpr int kTowerPairs = 30;          // random (x, y, g, h) per level
constexpr int kRingNormSamples = 20;     // random elements per (p, m)
constexpr int kPairingInstances = 20;    // randomized instances per layer and property
constexpr int kCocycleInstances = 10;    // conjugation instances overall
constexpr int kMainSequences = 3;        // distinct sequences per frame
constexpr double kFrameLimitS = 60;      // per frame
constexpr double kNormLimitS = 120;
constexpr double kTowerLimitS = 120;
constexpr double kRingNormLimitS = 300;
constexpr double kPairingLimitS = 300;
constexpr double kTheoremLimitS = 600;
constexpr double kCorollaryLimitS = 900;
constexpr double kIndependenceLimitS = 300;
constexpr double kMainLevelTwoBudgetS = 1800;

struct Frame {
    std::string tag;
    ltc::u64 p;
    int N, e, fH, d;
    std::string frame = "default";
};

CaseConfig make_case(const Frame& f, std::vector<std::string> suites, std::vector<std::string> checks, int samples,
                     int m = 0) {
    CaseConfig c;
    c.name = f.tag + (m ? "-m" + std::to_string(m) : "");
    c.ctx.p = f.p;
    c.ctx.N = f.N;
    c.ctx.e = f.e;
    c.ctx.fH = f.fH;
    c.ctx.d = f.d;
    c.frame = f.frame;
    c.m = m;
    c.suites = std::move(suites);
    c.checks = std::move(checks);
    c.samples = samples;
    c.seed = 20261015;
    return c;
}

struct Verdict {
    bool ok = true;
    std::vector<std::string> notes;
    void fail(const std::string& why) {
        ok = false;
        notes.push_back(why);
    }
};

int jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

std::vector<const CheckResult*> all_checks(const CampaignResult& r) {
    std::vector<const CheckResult*> out;
    for (const auto& s : r.runs)
        for (const auto& c : s.checks) out.push_back(&c);
    return out;
}

// Tally checks report "good/total" on the left and the total on the right.
std::optional<long> tally_total(const CheckResult& c) {
    static const std::regex re(R"((\d+)/(\d+))");
    std::smatch m;
    if (!std::regex_match(c.lhs, m, re) || c.rhs != m[2].str()) return std::nullopt;
    return std::stol(m[2].str());
}

std::optional<int> certified_digits(const CheckResult& c) {
    static const std::regex re(R"(modulo p\^(\d+))");
    std::smatch m;
    if (!std::regex_search(c.detail, m, re)) return std::nullopt;
    return std::stoi(m[1].str());
}

struct Summary {
    std::map<std::string, int> instances;
    int checks = 0;
};

// Every selected check passes, each required name occurs, tallies reach `min_total`, and no
// identity is certified below kMinDigits.
Summary audit(const CampaignResult& r, const std::set<std::string>& required, long min_total, Verdict& v,
              const std::string& where = "") {
    Summary s;
    for (const auto& run : r.runs) {
        if (run.skipped) v.fail(where + run.suite + " skipped");
        for (const auto& c : run.checks) {
            ++s.checks;
            ++s.instances[c.name];
            const std::string id = where + c.name + (c.instance.empty() ? "" : "[" + c.instance + "]");
            if (c.status != Status::pass)
                v.fail(id + " " + ltv::status_name(c.status) + (c.detail.empty() ? "" : ": " + c.detail));
            if (auto t = tally_total(c); t && *t < min_total)
                v.fail(id + " ran " + std::to_string(*t) + " < " + std::to_string(min_total));
            if (auto k = certified_digits(c); k && *k < kMinDigits)
                v.fail(id + " certified only modulo p^" + std::to_string(*k));
        }
    }
    for (const auto& name : required)
        if (!s.instances.count(name)) v.fail(where + name + " never ran");
    return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_limit(double secs, double limit, Verdict& v, const std::string& what = "runtime") {
    if (secs > limit) v.fail(what + " " + std::to_string(secs) + " s > " + std::to_string(limit) + " s");
}

CampaignResult run(const std::vector<CaseConfig>& cases, double& secs, double budget = 0) {
    CampaignConfig cfg;
    cfg.cases = cases;
    ltv::validate(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    CampaignResult r = ltv::run_campaign(cfg, {jobs(), budget});
    secs = seconds_since(t0);
    return r;
}

// ---------------------------------------------------------------------------

const std::vector<Frame> kFrames{
    {"p2", 2, 16, 1, 1, 1},      {"p2-ramified", 2, 16, 2, 1, 1}, {"p3", 3, 12, 1, 1, 1},
    {"p3-ramified", 3, 12, 2, 1, 1}, {"p5", 5, 10, 1, 1, 1},      {"p2-d2", 2, 16, 1, 1, 2},
    {"p3-d2", 3, 12, 1, 1, 2},   {"p5-d2", 5, 10, 1, 1, 2},
};

Verdict criterion1(std::string& line) {
    Verdict v;
    std::vector<CaseConfig> cases;
    for (const Frame& f : kFrames) {
        CaseConfig c = make_case(f, {"frame-invariants"}, {}, kFrameSamples);
        c.D = kFrameDegree;
        cases.push_back(c);
    }
    double secs = 0;
    CampaignResult r = run(cases, secs);
    audit(r, {"frame.group_axioms", "frame.twist", "frame.endomorphism", "frame.logarithm"},
          kFrameSamples * 3, v);
    double worst = 0;
    for (const auto& s : r.runs) worst = std::max(worst, s.wall_ms / 1000);
    check_limit(worst, kFrameLimitS, v, "slowest frame");
    line = std::to_string(kFrames.size()) + " frames, D=" + std::to_string(kFrameDegree) + ", " +
           std::to_string(kFrameSamples) + " a per frame, slowest frame " + std::to_string(worst) + " s";
    return v;
}

Verdict criterion2(std::string& line) {
    Verdict v;
    std::vector<CaseConfig> cases;
    for (ltc::u64 p : {2u, 3u, 5u}) {
        Frame f{"cyclotomic-p" + std::to_string(p), p, p == 2 ? 16 : (p == 3 ? 12 : 10), 1, 1, 1, "cyclotomic"};
        cases.push_back(make_case(f, {"norm-operator"}, {}, kNormSamples));
    }
    for (const Frame& f : kFrames)
        if (f.e == 2 || f.d == 2) cases.push_back(make_case(f, {"norm-operator"}, {}, kNormSamples));
    double secs = 0;
    CampaignResult r = run(cases, secs);
    audit(r,
          {"norm.mod_p", "norm.frobenius", "norm.principal_units", "norm.multiplicative", "norm.cyclotomic_oracle"},
          kNormSamples, v);
    check_limit(secs, kNormLimitS, v);
    // the closed forms themselves; the product oracle carries the sign (-1)^{p-1} of prod(-omega)
    std::string forms;
    for (const auto& s : r.runs)
        for (const auto& c : s.checks) {
            if (c.name != "norm.cyclotomic_oracle") continue;
            const ltc::u64 p = cases[s.case_index].ctx.p;
            const std::string h = c.instance.substr(2);
            const std::string want = "N(" + h + ") = " + h;
            const std::string want2 = "N(" + h + ") = -(" + h + ")";
            if (p != 2 && c.lhs != want) v.fail("p=" + std::to_string(p) + ": " + c.lhs);
            if (p == 2 && c.lhs != want2) v.fail("p=2: " + c.lhs);
            if (p == 2) forms += (forms.empty() ? "" : ", ") + c.lhs;
        }
    line = std::to_string(cases.size()) + " frames x " + std::to_string(kNormSamples) +
           " series, cyclotomic closed forms match the direct product (p=2: " + forms + "), " +
           std::to_string(secs) + " s";
    return v;
}

Verdict criterion3(std::string& line) {
    Verdict v;
    std::vector<CaseConfig> cases{
        make_case(kFrames[2], {"tower-norms"}, {"tower.eisenstein", "tower.homomorphism"}, kTowerPairs, 2),
        make_case(kFrames[4], {"tower-norms"}, {"tower.eisenstein", "tower.homomorphism"}, kTowerPairs, 2),
        make_case({"q9", 3, 12, 1, 2, 1}, {"tower-norms"}, {"tower.eisenstein", "tower.homomorphism"}, kTowerPairs, 1),
        make_case(kFrames[6], {"tower-norms"}, {"tower.eisenstein", "tower.homomorphism"}, kTowerPairs, 1),
    };
    double secs = 0;
    CampaignResult r = run(cases, secs);
    audit(r, {"tower.eisenstein", "tower.homomorphism"}, 1, v);
    // at least kTowerPairs pairs on every level, two identities per pair
    for (const auto& s : r.runs)
        for (const auto& c : s.checks)
            if (c.name == "tower.homomorphism" &&
                tally_total(c).value_or(0) < 2L * kTowerPairs * (cases[s.case_index].m + 1))
                v.fail(cases[s.case_index].name + ": too few pairs");
    check_limit(secs, kTowerLimitS, v);
    line = "p=3,5 to level 2, q=9 and d=2 to level 1, " + std::to_string(kTowerPairs) + " pairs per level, " +
           std::to_string(secs) + " s";
    return v;
}

Verdict criterion4(std::string& line) {
    Verdict v;
    std::vector<CaseConfig> cases{
        make_case(kFrames[0], {"tower-norms"}, {"tower.ring_norm"}, kRingNormSamples, 2),
        make_case(kFrames[2], {"tower-norms"}, {"tower.ring_norm"}, kRingNormSamples, 2),
        make_case(kFrames[4], {"tower-norms"}, {"tower.ring_norm"}, kRingNormSamples, 2),
        make_case({"q9", 3, 12, 1, 2, 1}, {"tower-norms"}, {"tower.ring_norm"}, kRingNormSamples, 1),
    };
    double secs = 0;
    CampaignResult r = run(cases, secs);
    Summary s = audit(r, {"tower.ring_norm"}, kRingNormSamples, v);
    if (s.instances["tower.ring_norm"] != 3 + 3 + 3 + 2) v.fail("missing (p, m) pairs");
    check_limit(secs, kRingNormLimitS, v);
    line = std::to_string(s.instances["tower.ring_norm"]) + " (p, m) pairs x " + std::to_string(kRingNormSamples) +
           " elements, " + std::to_string(secs) + " s";
    return v;
}

Verdict criterion5(std::string& line) {
    Verdict v;
    std::vector<CaseConfig> cases;
    for (int m : {0, 1}) {
        cases.push_back(make_case({"cyclotomic-p3", 3, 10, 1, 1, 1, "cyclotomic"}, {"pairing"}, {}, kPairingInstances, m));
        cases.push_back(make_case({"cyclotomic-p5", 5, 8, 1, 1, 1, "cyclotomic"}, {"pairing"}, {}, kPairingInstances, m));
        cases.push_back(make_case({"p3-d2", 3, 10, 1, 1, 2}, {"pairing"}, {}, kPairingInstances, m));
    }
    double secs = 0;
    CampaignResult r = run(cases, secs);
    Summary s = audit(r,
                      {"pairing.exp_formula", "pairing.well_defined", "pairing.bilinear", "pairing.push_down",
                       "pairing.aux_compatibility", "pairing.values"},
                      kPairingInstances, v);
    check_limit(secs, kPairingLimitS, v);
    line = std::to_string(cases.size()) + " (frame, layer) cases, " + std::to_string(s.checks) + " checks, >= " +
           std::to_string(kPairingInstances) + " instances each, " + std::to_string(secs) + " s";
    return v;
}

// denominator of a reduced "a/b"
long denominator(const std::string& r) {
    auto k = r.find('/');
    return k == std::string::npos ? 1 : std::stol(r.substr(k + 1));
}

Verdict criterion6(std::string& line) {
    Verdict v;
    std::vector<CaseConfig> cases;
    for (ltc::u64 p : {3u, 5u})
        for (int m = 0; m <= 2; ++m)
            for (long c : {2L, static_cast<long>(p) + 2, -1L}) {
                CaseConfig k = make_case({"p" + std::to_string(p) + "-c" + std::to_string(c), p, 10, 1, 1, 1},
                                         {"seiriki"}, {"seiriki.constant_term"}, 1, m);
                k.sequence = {"cyclotomic", {c}};
                if (p == 5 && m == 0 && c == 2) k.checks.push_back("seiriki.brute_force");
                cases.push_back(k);
            }
    double secs = 0;
    CampaignResult r = run(cases, secs);
    Summary s = audit(r, {"seiriki.constant_term", "seiriki.brute_force"}, 1, v);
    for (const auto& run : r.runs) {
        const CaseConfig& k = cases[run.case_index];
        const long q = static_cast<long>(k.ctx.p);
        const long bound = (q - 1) * static_cast<long>(ltc::ipow(q, k.m));
        int n = 0;
        for (const auto& c : run.checks) {
            if (c.name != "seiriki.constant_term") continue;
            ++n;
            if (bound % denominator(c.lhs) || bound % denominator(c.rhs)) v.fail(k.name + ": value outside (1/" + std::to_string(bound) + ")Z");
        }
        if (n != bound - 1) v.fail(k.name + ": " + std::to_string(n) + " characters, expected " + std::to_string(bound - 1));
    }
    check_limit(secs, kTheoremLimitS, v);
    line = std::to_string(cases.size()) + " (p, m, c) cases, " + std::to_string(s.instances["seiriki.constant_term"]) +
           " nontrivial characters, brute force at p=5 m=0 c=2, " + std::to_string(secs) + " s";
    return v;
}

Verdict criterion7(std::string& line) {
    Verdict v;
    std::vector<CaseConfig> cases;
    for (const Frame& f : kFrames) {
        if (f.d != 2) continue;
        for (int m : {0, 1}) {
            CaseConfig k = make_case(f, {"seiriki"}, {"seiriki.constant_term", "seiriki.w_sequence"}, 1, m);
            k.over_H = true;
            k.sequence = {"fixed-point", {f.p == 2 ? 3 : 2, 1}};
            cases.push_back(k);
        }
    }
    double secs = 0;
    CampaignResult r = run(cases, secs);
    Summary s = audit(r, {"seiriki.constant_term", "seiriki.w_sequence"}, 1, v);
    for (const auto& run : r.runs) {
        int n = 0;
        for (const auto& c : run.checks) n += c.name == "seiriki.constant_term";
        if (n == 0) v.fail(cases[run.case_index].name + ": no characters");
    }
    check_limit(secs, kCorollaryLimitS, v);
    line = std::to_string(cases.size()) + " d=2 cases, " + std::to_string(s.instances["seiriki.constant_term"]) +
           " characters over H, w-sequence on each, " + std::to_string(secs) + " s";
    return v;
}

struct MainFrame {
    Frame f;
    std::vector<ltv::SequenceSpec> sequences;
};

std::vector<MainFrame> main_frames(int N_inert) {
    return {
        {{"p3-inert", 3, N_inert, 1, 2, 1}, {{"cyclotomic", {2, 0}}, {"cyclotomic", {2, 1}}, {"fixed-point", {2, 1}}}},
        {{"p3-ramified", 3, 12, 2, 1, 1}, {{"cyclotomic", {2, 0}}, {"cyclotomic", {2, 1}}, {"fixed-point", {2, 1}}}},
        {{"p2-ramified", 2, 20, 2, 1, 1}, {{"cyclotomic", {3, 0}}, {"cyclotomic", {3, 2}}, {"fixed-point", {3, 1}}}},
    };
}

Verdict criterion8(std::string& line, bool full) {
    Verdict v;
    std::vector<CaseConfig> cases;
    for (const auto& mf : main_frames(12))
        for (std::size_t k = 0; k < mf.sequences.size(); ++k) {
            CaseConfig c = make_case(mf.f, {"main-congruence"}, {"main.congruence", "main.combined"}, 1);
            c.name += "-u" + std::to_string(k);
            c.sequence = mf.sequences[k];
            c.n = 1;
            cases.push_back(c);
        }
    double secs = 0;
    CampaignResult r = run(cases, secs);
    Summary s = audit(r, {"main.congruence", "main.combined"}, 1, v);
    if (s.instances["main.congruence"] != 2 * 3 * kMainSequences) v.fail("missing (i, j) orders");
    line = "n=1: 3 frames x " + std::to_string(kMainSequences) + " sequences, both orders, " + std::to_string(secs) + " s";
    if (full) {
        CaseConfig c = make_case(main_frames(20)[0].f, {"main-congruence"}, {"main.congruence", "main.combined"}, 1);
        c.name += "-n2";
        c.n = 2;
        c.sequence = main_frames(20)[0].sequences[0];
        double s2 = 0;
        CampaignResult r2 = run({c}, s2, kMainLevelTwoBudgetS);
        audit(r2, {"main.congruence", "main.combined"}, 1, v, "n=2: ");
        check_limit(s2, kMainLevelTwoBudgetS, v, "n=2 runtime");
        line += "; n=2 p=3 inert at N=20, " + std::to_string(s2) + " s";
    } else {
        line += "; n=2 not run (pass --full)";
    }
    return v;
}

Verdict criterion9(std::string& line) {
    Verdict v;
    std::vector<CaseConfig> cases;
    for (const Frame& f : {Frame{"p3", 3, 10, 1, 1, 1}, Frame{"p5", 5, 8, 1, 1, 1}, Frame{"p3-d2", 3, 10, 1, 1, 2}}) {
        CaseConfig c = make_case(f, {"seiriki"}, {"seiriki.generator_independence", "seiriki.cocycle"}, kCocycleInstances, 1);
        c.sequence = {"fixed-point", {2, 1}};
        cases.push_back(c);
    }
    double secs = 0;
    CampaignResult r = run(cases, secs);
    Summary s = audit(r, {"seiriki.generator_independence", "seiriki.cocycle"}, 1, v);
    if (s.instances["seiriki.cocycle"] < kCocycleInstances) v.fail("too few conjugation instances");
    check_limit(secs, kIndependenceLimitS, v);
    line = std::to_string(s.instances["seiriki.generator_independence"]) + " generator changes, " +
           std::to_string(s.instances["seiriki.cocycle"]) + " conjugation instances, " + std::to_string(secs) + " s";
    return v;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) h = (h ^ ch) * 1099511628211ull;
    return h;
}

Verdict criterion10(std::string& line) {
    Verdict v;
    CampaignConfig cfg;
    for (const std::string& suite : ltv::known_suites()) {
        CaseConfig c = make_case({"p3", 3, 10, 1, 1, 1}, {suite}, {}, 3, suite == "main-congruence" ? 0 : 1);
        if (suite == "main-congruence") c = make_case({"p3-inert", 3, 12, 1, 2, 1}, {suite}, {}, 3);
        c.name = "determinism-" + suite;
        cfg.cases.push_back(c);
    }
    ltv::validate(cfg);
    // one sequential and one parallel run: scheduling must not leak into the report
    const auto a = ltv::strip_timing(ltv::report_json(cfg, ltv::run_campaign(cfg, {1, 0}))).dump();
    const auto b = ltv::strip_timing(ltv::report_json(cfg, ltv::run_campaign(cfg, {std::max(4, jobs()), 0}))).dump();
    const auto ha = fnv1a(a), hb = fnv1a(b);
    if (ha != hb || a != b) v.fail("reports differ");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(ha));
    line = "two runs (1 and " + std::to_string(std::max(4, jobs())) + " workers), report hash " + buf + (ha == hb ? " both" : " vs other");
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria 1-10"};
    bool full = false;
    std::vector<int> only;
    app.add_flag("--full", full, "Also run the n=2 main congruence (up to 30 minutes)");
    app.add_option("--only", only, "Run only these criteria");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<int, std::function<Verdict(std::string&)>>> criteria{
        {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},
        {5, criterion5}, {6, criterion6}, {7, criterion7},
        {8, [&](std::string& l) { return criterion8(l, full); }},
        {9, criterion9}, {10, criterion10},
    };
    int failed = 0;
    for (const auto& [id, fn] : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        std::string line;
        Verdict v;
        try {
            v = fn(line);
        } catch (const std::exception& e) {
            v.fail(std::string("aborted: ") + e.what());
        }
        std::printf("criterion %2d %s  %s\n", id, v.ok ? "PASS" : "FAIL", line.c_str());
        for (std::size_t k = 0; k < v.notes.size() && k < 8; ++k) std::printf("               - %s\n", v.notes[k].c_str());
        if (v.notes.size() > 8) std::printf("               - ... %zu more\n", v.notes.size() - 8);
        std::fflush(stdout);
        failed += !v.ok;
    }
    return failed ? 1 : 0;
}
