#include "ltverify/config.hpp"
#include "ltverify/suites.hpp"

#include <algorithm>
#include <fstream>

namespace ltv {

using nlohmann::json;

const std::vector<std::string>& known_suites() {
    static const std::vector<std::string> s{"frame-invariants", "norm-operator", "tower-norms",
                                            "pairing",          "seiriki",       "main-congruence"};
    return s;
}

namespace {

const std::vector<std::string> kCaseKeys{"name",    "p",         "N",          "e",       "fH",     "d",
                                         "eis",     "frame",     "f",          "xi",      "D",      "D2",
                                         "m",       "n",         "over_H",     "sequence", "characters",
                                         "suites",  "checks",    "samples",    "seed"};

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

CaseConfig parse_case(const json& j, std::size_t index) {
    if (!j.is_object()) throw ConfigError("case " + std::to_string(index) + ": not an object");
    for (const auto& [k, v] : j.items())
        if (std::find(kCaseKeys.begin(), kCaseKeys.end(), k) == kCaseKeys.end())
            throw ConfigError("case " + std::to_string(index) + ": unknown key '" + k + "'");
    CaseConfig c;
    c.name = get_or<std::string>(j, "name", "case-" + std::to_string(index));
    c.ctx.p = get_or<u64>(j, "p", 3);
    c.ctx.N = get_or<int>(j, "N", 10);
    c.ctx.e = get_or<int>(j, "e", 1);
    c.ctx.fH = get_or<int>(j, "fH", 1);
    c.ctx.d = get_or<int>(j, "d", 1);
    if (j.contains("eis")) {
        auto v = j.at("eis").get<std::vector<i64>>();
        if (v.size() != 2) throw ConfigError(c.name + ": eis needs two coefficients");
        c.ctx.eis = std::array<i64, 2>{v[0], v[1]};
    }
    c.frame = get_or<std::string>(j, "frame", "default");
    c.f = get_or<std::vector<i64>>(j, "f", {});
    if (!c.f.empty() && !j.contains("frame")) c.frame = "coeffs";
    c.xi = get_or<i64>(j, "xi", 0);
    c.D = get_or<int>(j, "D", 0);
    c.D2 = get_or<int>(j, "D2", 0);
    c.m = get_or<int>(j, "m", 0);
    c.n = get_or<int>(j, "n", 1);
    c.over_H = get_or<bool>(j, "over_H", false);
    if (j.contains("sequence")) {
        const json& s = j.at("sequence");
        c.sequence.kind = get_or<std::string>(s, "kind", "cyclotomic");
        c.sequence.values = get_or<std::vector<i64>>(s, "values", {2});
    }
    if (j.contains("characters")) {
        const json& s = j.at("characters");
        if (s.is_string()) {
            c.characters.mode = s.get<std::string>();
        } else {
            c.characters.mode = "explicit";
            for (const auto& chi : s.at("explicit")) {
                std::vector<std::pair<i64, i64>> vals;
                for (const auto& v : chi) vals.push_back({v.at(0).get<i64>(), v.at(1).get<i64>()});
                c.characters.explicit_values.push_back(vals);
            }
        }
    }
    c.suites = get_or<std::vector<std::string>>(j, "suites", {});
    c.checks = get_or<std::vector<std::string>>(j, "checks", {});
    c.samples = get_or<int>(j, "samples", 5);
    c.seed = get_or<u64>(j, "seed", 1);
    return c;
}

}  // namespace

CampaignConfig parse_config(const json& j) {
    CampaignConfig cfg;
    try {
        if (!j.is_object()) throw ConfigError("config: top level must be an object");
        cfg.schema = get_or<int>(j, "schema", 1);
        if (cfg.schema != 1) throw ConfigError("config: unsupported schema " + std::to_string(cfg.schema));
        if (j.contains("cases")) {
            std::size_t i = 0;
            for (const auto& c : j.at("cases")) cfg.cases.push_back(parse_case(c, i++));
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

CampaignConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    json j;
    try {
        j = json::parse(in, nullptr, true, true);  // comments allowed
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return parse_config(j);
}

json echo_case(const CaseConfig& c) {
    json j;
    j["name"] = c.name;
    j["p"] = c.ctx.p;
    j["N"] = c.ctx.N;
    j["e"] = c.ctx.e;
    j["fH"] = c.ctx.fH;
    j["d"] = c.ctx.d;
    if (c.ctx.eis) j["eis"] = {(*c.ctx.eis)[0], (*c.ctx.eis)[1]};
    j["frame"] = c.frame;
    if (!c.f.empty()) j["f"] = c.f;
    if (c.xi) j["xi"] = c.xi;
    j["D"] = c.D;
    j["D2"] = c.D2;
    j["m"] = c.m;
    j["n"] = c.n;
    j["over_H"] = c.over_H;
    j["sequence"] = {{"kind", c.sequence.kind}, {"values", c.sequence.values}};
    if (c.characters.mode == "explicit") {
        json chis = json::array();
        for (const auto& chi : c.characters.explicit_values) {
            json vals = json::array();
            for (const auto& [a, b] : chi) vals.push_back({a, b});
            chis.push_back(vals);
        }
        j["characters"] = {{"explicit", chis}};
    } else {
        j["characters"] = c.characters.mode;
    }
    j["suites"] = c.suites;
    if (!c.checks.empty()) j["checks"] = c.checks;
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    return j;
}

CaseEnv prepare_case(const CaseConfig& c) {
    try {
        for (const auto& s : c.suites)
            if (std::find(known_suites().begin(), known_suites().end(), s) == known_suites().end())
                throw ConfigError("unknown suite '" + s + "'");
        for (const auto& k : c.checks)
            if (!find_check(k)) throw ConfigError("unknown check '" + k + "'");
        if (c.samples < 1) throw ConfigError("samples must be positive");
        if (c.m < 0 || c.n < 1) throw ConfigError("need m >= 0 and n >= 1");
        const std::vector<std::string> kinds{"cyclotomic", "fixed-point", "one"};
        if (std::find(kinds.begin(), kinds.end(), c.sequence.kind) == kinds.end())
            throw ConfigError("unknown sequence kind '" + c.sequence.kind + "'");
        const std::vector<std::string> modes{"all", "generators", "explicit"};
        if (std::find(modes.begin(), modes.end(), c.characters.mode) == modes.end())
            throw ConfigError("unknown character selection '" + c.characters.mode + "'");
        CaseEnv env;
        env.ctx = ltc::RingContext::make(c.ctx);
        const ltc::RingContext& R = *env.ctx;
        const int q = static_cast<int>(R.q());
        if (c.frame == "default") {
            env.frame = ltc::default_frame(R, q);
        } else if (c.frame == "cyclotomic") {
            env.frame = ltc::cyclotomic_frame(R, q);
        } else if (c.frame == "coeffs") {
            if (c.f.empty()) throw ConfigError("frame 'coeffs' needs f");
            ltc::Series f = ltc::Series::from_ints(R, static_cast<int>(c.f.size()) - 1, c.f);
            env.frame = ltc::check_frame(f, R.from_int(c.xi ? c.xi : static_cast<i64>(R.p())));
        } else {
            throw ConfigError("unknown frame '" + c.frame + "'");
        }
        return env;
    } catch (const ConfigError& e) {
        throw ConfigError(c.name + ": " + e.what());
    } catch (const std::exception& e) {
        throw ConfigError(c.name + ": " + e.what());
    }
}

void validate(const CampaignConfig& cfg) {
    for (const auto& c : cfg.cases) prepare_case(c);
}

}  // namespace ltv
