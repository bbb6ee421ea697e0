// acceptance.hpp
// The property-based acceptance suite: scalar Yosida laws, operator
// identities on random fields, the quadrature identity for N, mean-value
// laws, the summed energy identity, the four singular-limit sweeps (with a
// dense matrix-exponential cross-check on a linear toy), weak residuals, and
// artifact reproducibility. Each criterion carries its tolerances in code;
// the CLI `verify` subcommand and the ctest acceptance binary both run this.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pfcs {

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

const std::vector<std::string>& acceptance_names();

// Run every criterion whose name contains `filter` (all when empty).
// Unknown filters yield an empty result list.
std::vector<CriterionResult> run_acceptance(const std::string& filter = "");

// One "PASS/FAIL name detail (seconds)" line per criterion.
void print_results(const std::vector<CriterionResult>& results, std::ostream& os);

} // namespace pfcs
