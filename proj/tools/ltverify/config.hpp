#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ltc/lubin_tate.hpp"

namespace ltv {

using ltc::i64;
using ltc::u64;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// "cyclotomic": g = [c]_f(T)/T with c given by its coordinates over basis_H;
// "fixed-point": the norm fixed point through the seed polynomial; "one": g = 1.
struct SequenceSpec {
    std::string kind = "cyclotomic";
    std::vector<i64> values{2};
};

// "all" (nontrivial characters), "generators" (one per unit generator), or "explicit"
// (images of TowerGroup::generators() as num/den pairs, one list per character).
struct CharacterSpec {
    std::string mode = "all";
    std::vector<std::vector<std::pair<i64, i64>>> explicit_values;
};

struct CaseConfig {
    std::string name;
    ltc::ContextParams ctx;
    std::string frame = "default";  // default | cyclotomic | coeffs
    std::vector<i64> f;             // frame coefficients, low to high ("coeffs")
    i64 xi = 0;                     // norm of the linear coefficient ("coeffs"); 0 means p
    int D = 0;                      // univariate truncation; 0 picks a per-suite default
    int D2 = 0;                     // bivariate truncation; 0 picks a per-suite default
    int m = 0;                      // tower level for tower, pairing and seiriki suites
    int n = 1;                      // kappa level for main-congruence
    bool over_H = false;            // characters of Gal(H'_m / H) instead of Gal(H'_m / H')
    SequenceSpec sequence;
    CharacterSpec characters;
    std::vector<std::string> suites;
    std::vector<std::string> checks;  // when nonempty, only these check names run
    int samples = 5;
    u64 seed = 1;
};

struct CampaignConfig {
    int schema = 1;
    std::vector<CaseConfig> cases;
};

const std::vector<std::string>& known_suites();

CampaignConfig parse_config(const nlohmann::json& j);
CampaignConfig load_config(const std::string& path);
nlohmann::json echo_case(const CaseConfig& c);

struct CaseEnv {
    ltc::Ctx ctx;
    ltc::Frame frame;
};
// Builds the context and frame; every failure surfaces as ConfigError naming the case.
CaseEnv prepare_case(const CaseConfig& c);
void validate(const CampaignConfig& cfg);

}  // namespace ltv
