#ifndef DISCLAB_ACCEPTANCE_HPP
#define DISCLAB_ACCEPTANCE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace disclab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;  // deterministic (no timings, no addresses)
};

// Runs acceptance criteria 1..10 with all tolerances pinned in code.
// Determinism (criterion 11) is checked by the caller running this twice.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed);

std::string format_report(const std::vector<CriterionResult>& rows);

}  // namespace disclab

#endif
