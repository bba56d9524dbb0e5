#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "hmorrey/plan.hpp"

namespace hmorrey {

// Theorem ids: kernel-membership, young, maximal, br-1, br-2, br-3, gbr,
// olsen-gbr, gfrac, olsen-gfrac, olsen-br, campanato.
const std::vector<std::string>& theorem_ids();

// One numerical experiment. Unused numeric parameters stay NaN and unused
// profile specs stay empty.
struct TheoremCase {
    std::string id;
    std::string theorem;
    std::string group = "abelian:aniso:nu=1,2";
    double alpha = NAN, gamma = NAN, p = NAN, q = NAN, p1 = NAN, p2 = NAN, beta = NAN;
    std::string rho, phi, omega, psi;
    std::string weight;                   // W of the Olsen inequalities
    std::vector<std::string> functions;   // catalog specs; "f|h" pairs for young, R values for kernel-membership
    QuadraturePlan plan = harness_plan();
    RadiusGrid grid = harness_grid();     // sup grid of every function-space norm
    double bound = NAN;                   // pinned regression bound on the max ratio
    std::string avg = "both";             // campanato: literal, mean or both

    static QuadraturePlan harness_plan();
    static RadiusGrid harness_grid();
    static TheoremCase from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct HypothesisCheck {
    std::string id;
    bool holds = false;
    double constant = 0.0;
    std::string note;
};

struct FunctionResult {
    std::string function;
    std::string convention;  // campanato only
    double lhs = 0.0, lhs_error = 0.0;
    double rhs = 0.0, rhs_error = 0.0;
    double ratio = 0.0;
    // olsen cases: Olsen ratio over the operator-theorem ratio, at most 1 by Hoelder
    double holder = NAN;
};

struct VerificationReport {
    TheoremCase input;
    nlohmann::json derived = nlohmann::json::object();
    std::vector<HypothesisCheck> hypotheses;
    std::vector<HypothesisCheck> checks;  // structural post-conditions
    std::vector<FunctionResult> results;
    double max_ratio = 0.0;
    bool pass = false;
    std::string failure;
    double runtime = 0.0;

    // with_runtime false drops the only nondeterministic field
    nlohmann::json to_json(bool with_runtime = true) const;
};

// Hypothesis failures end up in the report; numerical divergence throws.
VerificationReport run_theorem(const TheoremCase& c);

struct SuiteSummary {
    std::vector<VerificationReport> reports;
    bool all_pass = true;
};

// Runs every case, recording exceptions as failed reports. With a non-empty
// directory, writes report.json and summary.csv there.
SuiteSummary run_suite(const std::vector<TheoremCase>& cases, const std::filesystem::path& out_dir = {},
                       bool with_runtime = true);

// One case per theorem id, with pinned regression bounds.
std::vector<TheoremCase> default_suite();

std::string summary_csv(const SuiteSummary& s);

}  // namespace hmorrey
